#include "nlbox/common.hpp"

#include <utility>

#include "nlbox/rng.hpp"

namespace nlbox {

std::string_view to_string(Party p) noexcept {
  return p == Party::Alice ? "alice" : "bob";
}

Bit inner_product(std::span<const Bit> x, std::span<const Bit> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("inner_product: length mismatch");
  }
  Bit acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc ^= (x[i] & y[i]);
  return acc;
}

Bit parity(std::span<const Bit> bits) noexcept {
  Bit acc = 0;
  for (Bit b : bits) acc ^= b;
  return acc;
}

std::string to_string(std::span<const Bit> bits) {
  std::string out;
  out.reserve(bits.size());
  for (Bit b : bits) out.push_back(b ? '1' : '0');
  return out;
}

BitString bits_from_string(std::string_view text) {
  BitString out;
  out.reserve(text.size());
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    }
    out.push_back(static_cast<Bit>(ch - '0'));
  }
  return out;
}

BitString Rng::bits(std::size_t count) {
  BitString out(count);
  for (auto& b : out) b = bit();
  return out;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
  // rejection sampling on the top of the range
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return draw % bound;
}

std::vector<std::size_t> Rng::sample(std::vector<std::size_t> pool,
                                     std::size_t count) {
  if (count > pool.size()) {
    throw std::invalid_argument("Rng::sample: count exceeds pool size");
  }
  // partial Fisher-Yates
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace nlbox
