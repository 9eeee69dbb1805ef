#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlbox/common.hpp"

namespace nlbox::sim {

/// Largest n for which exact_pcy will enumerate (2^{2n} strings per query).
inline constexpr std::size_t kEnumerationCap = 8;
/// Largest n for which exact_bias_table sweeps every y.
inline constexpr std::size_t kFullSweepCap = 5;

struct ExactFraction {
  std::uint64_t favorable = 0;
  std::uint64_t total = 0;
  double value() const noexcept {
    return static_cast<double>(favorable) / static_cast<double>(total);
  }
};

/// Fraction of strings x of length 2n+1 with decode(x) = c for which
/// x.y = c, computed by enumerating decode^{-1}(c).
///
/// Throws std::invalid_argument if y is all zero or has the wrong length,
/// ResourceLimit if n exceeds `cap`.
ExactFraction exact_pcy_fraction(std::size_t n, std::span<const Bit> y, Bit c,
                                 std::size_t cap = kEnumerationCap);

inline double exact_pcy(std::size_t n, std::span<const Bit> y, Bit c,
                        std::size_t cap = kEnumerationCap) {
  return exact_pcy_fraction(n, y, c, cap).value();
}

struct BiasEntry {
  BitString y;
  Bit c = 0;
  ExactFraction p;
  double deviation() const noexcept { return p.value() - 0.5; }
};

/// p^c_y for every (c, y != 0) when n <= kFullSweepCap; above that, the
/// saturating witness y = 0^{2n}1 plus `sampled_y` random nonzero y.
struct ExactBiasTable {
  std::size_t n = 0;
  bool full_sweep = true;
  std::vector<BiasEntry> entries;

  double max_abs_deviation() const noexcept;
  /// Bound 2^{-(n+1)} on |p^c_y - 1/2|.
  double bound() const noexcept;
  /// First entry whose deviation reaches the bound, or nullptr.
  const BiasEntry* tightness_witness() const noexcept;
};

ExactBiasTable exact_bias_table(std::size_t n, std::size_t sampled_y = 256,
                                std::uint64_t seed = 0);

/// Exact Pr[S > threshold] for S ~ Binomial(n, 1/2). Requires
/// threshold <= n.
double binomial_tail(std::size_t n, std::size_t threshold);

/// The same probability as a reduced fraction "p/q".
std::string binomial_tail_rational(std::size_t n, std::size_t threshold);

}  // namespace nlbox::sim
