#pragma once

#include <cstddef>
#include <span>

#include "nlbox/common.hpp"
#include "nlbox/rng.hpp"

namespace nlbox {

/// Number of "11" pairs at pair-aligned positions: the string is consumed
/// two bits at a time and a pair counts iff it is exactly 11. Overlapping
/// occurrences ("0110" has none) are not counted. Throws
/// std::invalid_argument on odd length.
std::size_t count11(std::span<const Bit> s);

/// Bit carried by an odd-length string x_1..x_{2n+1}:
/// (count11(x_1..x_{2n}) + x_{2n+1}) mod 2.
Bit decode_bits(std::span<const Bit> x);

/// Odd-length string that encodes one committed bit.
class CommitString {
 public:
  /// Throws std::invalid_argument unless bits has odd length and is binary.
  explicit CommitString(BitString bits);

  std::size_t n() const noexcept { return (bits_.size() - 1) / 2; }
  const BitString& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  Bit decode() const { return decode_bits(bits_); }

 private:
  BitString bits_;
};

inline Bit decode(const CommitString& x) { return x.decode(); }

/// Completes a 2n-bit prefix with the unique final bit that makes the
/// string encode `c`.
CommitString complete_encoding(Bit c, std::span<const Bit> prefix);

/// Uniform element of decode^{-1}(c) among strings of length 2n+1.
CommitString encode(Bit c, std::size_t n, Rng& rng);

}  // namespace nlbox
