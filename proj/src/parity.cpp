#include "nlbox/parity.hpp"

#include <utility>

namespace nlbox {

std::size_t count11(std::span<const Bit> s) {
  if (s.size() % 2 != 0) {
    throw std::invalid_argument("count11: length must be even");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    if (s[i] == 1 && s[i + 1] == 1) ++count;
  }
  return count;
}

Bit decode_bits(std::span<const Bit> x) {
  if (x.size() % 2 != 1) {
    throw std::invalid_argument("decode: length must be odd");
  }
  const auto body = x.first(x.size() - 1);
  return static_cast<Bit>((count11(body) + x.back()) & 1U);
}

CommitString::CommitString(BitString bits) : bits_(std::move(bits)) {
  if (bits_.size() % 2 != 1) {
    throw std::invalid_argument("CommitString: length must be 2n+1");
  }
  for (Bit b : bits_) {
    if (b > 1) throw std::invalid_argument("CommitString: non-binary entry");
  }
}

CommitString complete_encoding(Bit c, std::span<const Bit> prefix) {
  if (c > 1) throw std::invalid_argument("committed value must be 0 or 1");
  BitString bits(prefix.begin(), prefix.end());
  // count11 + last + c must be even
  bits.push_back(static_cast<Bit>((count11(prefix) + c) & 1U));
  return CommitString(std::move(bits));
}

CommitString encode(Bit c, std::size_t n, Rng& rng) {
  const BitString prefix = rng.bits(2 * n);
  return complete_encoding(c, prefix);
}

}  // namespace nlbox
