#include "nlbox/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

namespace nlbox::sim {
namespace {

// Independent reference: scans every string of length 2n+1, with decode
// written out from the definition on packed bits.
struct Counts {
  std::uint64_t favorable = 0, total = 0;
};

Counts brute_pcy(std::size_t n, std::uint64_t ymask, int c) {
  const std::size_t len = 2 * n + 1;
  Counts out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << len); ++x) {
    int pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pairs += ((x >> (2 * i)) & 3U) == 3U;
    }
    const int dec = (pairs + int((x >> (2 * n)) & 1U)) & 1;
    if (dec != c) continue;
    ++out.total;
    out.favorable += (__builtin_popcountll(x & ymask) & 1) == c;
  }
  return out;
}

BitString unpack(std::uint64_t m, std::size_t len) {
  BitString s(len);
  for (std::size_t i = 0; i < len; ++i) s[i] = (m >> i) & 1U;
  return s;
}

// Pascal's triangle in integers; exact for n <= 62.
double pascal_tail(std::size_t n, std::size_t t) {
  std::vector<std::uint64_t> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next(row.size() + 1, 0);
    for (std::size_t j = 0; j < row.size(); ++j) {
      next[j] += row[j];
      next[j + 1] += row[j];
    }
    row = std::move(next);
  }
  std::uint64_t above = 0;
  for (std::size_t j = t + 1; j <= n; ++j) above += row[j];
  return std::ldexp(double(above), -int(n));
}

TEST(ExactPcy, MatchesBruteForceForEveryY) {
  for (std::size_t n = 0; n <= 4; ++n) {
    const std::size_t len = 2 * n + 1;
    for (std::uint64_t y = 1; y < (std::uint64_t{1} << len); ++y) {
      for (int c = 0; c <= 1; ++c) {
        const Counts ref = brute_pcy(n, y, c);
        const ExactFraction got = exact_pcy_fraction(n, unpack(y, len), Bit(c));
        ASSERT_EQ(got.total, ref.total);
        ASSERT_EQ(got.favorable, ref.favorable) << "n=" << n << " y=" << y;
      }
    }
  }
}

TEST(ExactPcy, KnownValues) {
  EXPECT_DOUBLE_EQ(exact_pcy(0, bits_from_string("1"), 0), 1.0);
  EXPECT_DOUBLE_EQ(exact_pcy(0, bits_from_string("1"), 1), 1.0);
  EXPECT_DOUBLE_EQ(exact_pcy(1, bits_from_string("001"), 0), 0.75);
  EXPECT_DOUBLE_EQ(exact_pcy(1, bits_from_string("001"), 1), 0.75);
}

TEST(ExactPcy, BothBitsAgreeForEveryY) {
  // the bias toward c is the same for c = 0 and c = 1
  for (std::size_t n = 1; n <= 4; ++n) {
    const std::size_t len = 2 * n + 1;
    for (std::uint64_t y = 1; y < (std::uint64_t{1} << len); ++y) {
      const BitString ys = unpack(y, len);
      ASSERT_EQ(exact_pcy_fraction(n, ys, 0).favorable,
                exact_pcy_fraction(n, ys, 1).favorable);
    }
  }
}

TEST(ExactPcy, RejectsBadInput) {
  EXPECT_THROW(exact_pcy(1, bits_from_string("000"), 0), std::invalid_argument);
  EXPECT_THROW(exact_pcy(1, bits_from_string("01"), 0), std::invalid_argument);
  EXPECT_THROW(exact_pcy(3, bits_from_string("0000001"), 0, 2), ResourceLimit);
}

TEST(ExactBiasTable, BoundAndWitnessUpToFive) {
  for (std::size_t n = 0; n <= 5; ++n) {
    const ExactBiasTable t = exact_bias_table(n);
    EXPECT_TRUE(t.full_sweep);
    EXPECT_EQ(t.entries.size(), 2 * ((std::size_t{1} << (2 * n + 1)) - 1));
    EXPECT_DOUBLE_EQ(t.bound(), std::ldexp(1.0, -int(n + 1)));
    EXPECT_LE(t.max_abs_deviation(), t.bound());
    ASSERT_NE(t.tightness_witness(), nullptr);
  }
}

TEST(ExactBiasTable, SampledAboveSweepCap) {
  const ExactBiasTable t = exact_bias_table(6, 16, 3);
  EXPECT_FALSE(t.full_sweep);
  EXPECT_LE(t.max_abs_deviation(), t.bound());
  EXPECT_NE(t.tightness_witness(), nullptr);
}

TEST(BinomialTail, MatchesPascal) {
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t t = 0; t <= n; ++t) {
      ASSERT_DOUBLE_EQ(binomial_tail(n, t), pascal_tail(n, t)) << n << "," << t;
    }
  }
}

TEST(BinomialTail, FrozenValues) {
  EXPECT_DOUBLE_EQ(binomial_tail(36, 24), 0.014408359827939421);
  EXPECT_EQ(binomial_tail_rational(36, 24), "247533737/17179869184");
  EXPECT_DOUBLE_EQ(binomial_tail(9, 6), 0.08984375);
  EXPECT_DOUBLE_EQ(binomial_tail(1, 0), 0.5);
  EXPECT_DOUBLE_EQ(binomial_tail(7, 7), 0.0);
  EXPECT_THROW(binomial_tail(3, 4), std::invalid_argument);
}

}  // namespace
}  // namespace nlbox::sim
