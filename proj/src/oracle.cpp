#include "nlbox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "nlbox/parity.hpp"
#include "nlbox/rng.hpp"

namespace nlbox::sim {

ExactFraction exact_pcy_fraction(std::size_t n, std::span<const Bit> y, Bit c,
                                 std::size_t cap) {
  if (y.size() != 2 * n + 1) {
    throw std::invalid_argument("exact_pcy: y must have length 2n+1");
  }
  if (std::none_of(y.begin(), y.end(), [](Bit b) { return b != 0; })) {
    throw std::invalid_argument("exact_pcy: y = 0 is degenerate");
  }
  if (n > cap) {
    throw ResourceLimit("exact_pcy: n=" + std::to_string(n) +
                        " exceeds enumeration cap " + std::to_string(cap));
  }
  const std::size_t body = 2 * n;
  const std::uint64_t prefixes = std::uint64_t{1} << body;
  BitString x(body + 1, 0);
  ExactFraction frac;
  frac.total = prefixes;
  for (std::uint64_t mask = 0; mask < prefixes; ++mask) {
    for (std::size_t i = 0; i < body; ++i) {
      x[i] = static_cast<Bit>((mask >> i) & 1U);
    }
    x[body] = static_cast<Bit>((count11(std::span<const Bit>(x).first(body)) + c) & 1U);
    if (inner_product(x, y) == c) ++frac.favorable;
  }
  return frac;
}

double ExactBiasTable::max_abs_deviation() const noexcept {
  double best = 0.0;
  for (const auto& e : entries) best = std::max(best, std::abs(e.deviation()));
  return best;
}

double ExactBiasTable::bound() const noexcept {
  return std::ldexp(1.0, -static_cast<int>(n + 1));
}

const BiasEntry* ExactBiasTable::tightness_witness() const noexcept {
  for (const auto& e : entries) {
    if (std::abs(e.deviation()) == bound()) return &e;
  }
  return nullptr;
}

ExactBiasTable exact_bias_table(std::size_t n, std::size_t sampled_y,
                                std::uint64_t seed) {
  if (n > kEnumerationCap) {
    throw ResourceLimit("exact_bias_table: n exceeds enumeration cap");
  }
  ExactBiasTable table;
  table.n = n;
  const std::size_t len = 2 * n + 1;
  std::vector<BitString> ys;
  if (n <= kFullSweepCap) {
    const std::uint64_t count = std::uint64_t{1} << len;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      BitString y(len);
      for (std::size_t i = 0; i < len; ++i) {
        y[i] = static_cast<Bit>((mask >> i) & 1U);
      }
      ys.push_back(std::move(y));
    }
  } else {
    table.full_sweep = false;
    BitString witness(len, 0);
    witness.back() = 1;
    ys.push_back(witness);
    Rng rng(seed);
    while (ys.size() < sampled_y + 1) {
      BitString y = rng.bits(len);
      if (std::any_of(y.begin(), y.end(), [](Bit b) { return b != 0; })) {
        ys.push_back(std::move(y));
      }
    }
  }
  table.entries.reserve(ys.size() * 2);
  for (const auto& y : ys) {
    for (Bit c = 0; c <= 1; ++c) {
      table.entries.push_back(BiasEntry{y, c, exact_pcy_fraction(n, y, c)});
    }
  }
  return table;
}

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_rational tail_exact(std::size_t n, std::size_t threshold) {
  if (threshold > n) {
    throw std::invalid_argument("binomial_tail: threshold must be <= n");
  }
  cpp_int binom = 1;  // C(n, j)
  cpp_int upper = 0;
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > threshold) upper += binom;
    binom = binom * (n - j) / (j + 1);
  }
  cpp_int denom = cpp_int(1) << n;
  return cpp_rational(upper, denom);
}

}  // namespace

double binomial_tail(std::size_t n, std::size_t threshold) {
  return tail_exact(n, threshold).convert_to<double>();
}

std::string binomial_tail_rational(std::size_t n, std::size_t threshold) {
  const cpp_rational r = tail_exact(n, threshold);
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace nlbox::sim
