#include "nlbox/bc.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "nlbox/oracle.hpp"

namespace nlbox::bc {
namespace {

struct Parties {
  BoxSession session;
  Rng alice;
  Rng bob;
  explicit Parties(std::uint64_t seed, std::size_t boxes)
      : session(derive_seed(seed, 0), boxes),
        alice(derive_seed(seed, 1)),
        bob(derive_seed(seed, 2)) {}
};

ProtocolResult run(const BCParams& p, const AliceStrategy& a,
                   std::uint64_t seed, const BobStrategy& b = BobStrategy::honest()) {
  Parties r(seed, p.total_boxes());
  return run_protocol(p, a, b, r.session, r.alice, r.bob);
}

double reject_rate(const BCParams& p, const AliceStrategy& a, int trials,
                   std::uint64_t base) {
  int rejected = 0;
  for (int t = 0; t < trials; ++t) {
    rejected += run(p, a, base + t).verdict == Verdict::Reject;
  }
  return double(rejected) / trials;
}

TEST(BCParams, Validation) {
  EXPECT_THROW((BCParams{0, 1}.validate()), std::invalid_argument);
  EXPECT_THROW((BCParams{1, 0}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((BCParams{2, 10}.validate()));
  EXPECT_EQ((BCParams{2, 10}.total_boxes()), 50U);
}

TEST(BCHonest, AlwaysAcceptsAndRevealsCommittedBit) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k : {1, 3, 10}) {
      for (int t = 0; t < 200; ++t) {
        const Bit c = t & 1;
        const ProtocolResult r = run({n, k}, AliceStrategy::honest(c), 1000 * n + 37 * k + t);
        ASSERT_EQ(r.verdict, Verdict::Accept);
        ASSERT_EQ(r.revealed_bit, c);
        ASSERT_EQ(r.blocks.size(), k);
      }
    }
  }
}

TEST(BCHonest, TranscriptIsConsistent) {
  const ProtocolResult r = run({3, 2}, AliceStrategy::honest(1), 5);
  for (const BlockTranscript& b : r.blocks) {
    ASSERT_EQ(b.x.size(), 7U);
    EXPECT_EQ(decode_bits(b.x), 1);
    EXPECT_EQ(parity(b.a), b.A);
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      EXPECT_EQ(b.a[i] ^ b.b[i], b.x[i] & b.y[i]);
    }
  }
}

TEST(BCHonest, MixedBitsRejectedAsMisuse) {
  const BCParams p{1, 2};
  Parties r(1, p.total_boxes());
  const std::vector<AliceStrategy> alice{AliceStrategy::honest(0),
                                         AliceStrategy::honest(1)};
  EXPECT_THROW(run_protocol(p, alice, BobStrategy::honest(), r.session, r.alice, r.bob),
               std::invalid_argument);
}

TEST(BCHonest, TooFewBoxes) {
  const BCParams p{2, 2};
  Parties r(1, p.total_boxes() - 1);
  EXPECT_THROW(run_protocol(p, AliceStrategy::honest(0), BobStrategy::honest(),
                            r.session, r.alice, r.bob),
               std::invalid_argument);
}

TEST(BCBinding, DelayedSingleBlockCaughtAQuarterOfTheTime) {
  for (Bit c_prime = 0; c_prime <= 1; ++c_prime) {
    const double rate = reject_rate({2, 1}, AliceStrategy::delay_all(c_prime), 40000, 10 + c_prime * 100000);
    EXPECT_NEAR(rate, 0.25, 0.01);
  }
}

TEST(BCBinding, DelayedRevealAlwaysDecodesToTarget) {
  for (int t = 0; t < 500; ++t) {
    const Bit c_prime = t & 1;
    const ProtocolResult r = run({3, 1}, AliceStrategy::delay_all(c_prime), t);
    EXPECT_EQ(decode_bits(r.blocks[0].revealed_x), c_prime);
    EXPECT_EQ(parity(r.blocks[0].revealed_a), r.blocks[0].A);
  }
}

TEST(BCBinding, FlipCaughtHalfTheTime) {
  const double rate = reject_rate({2, 1}, AliceStrategy::flip_after_input(0, 1), 40000, 77);
  EXPECT_NEAR(rate, 0.5, 0.01);
}

TEST(BCBinding, FlipChangesDecodedBitOnly) {
  for (int t = 0; t < 300; ++t) {
    const ProtocolResult r = run({2, 1}, AliceStrategy::flip_after_input(1, 0), 500 + t);
    const BlockTranscript& b = r.blocks[0];
    EXPECT_EQ(decode_bits(b.x), 1);
    EXPECT_EQ(decode_bits(b.revealed_x), 0);
    std::size_t diff = 0;
    for (std::size_t i = 0; i < b.x.size(); ++i) diff += b.x[i] != b.revealed_x[i];
    EXPECT_EQ(diff, 1U);
    EXPECT_EQ(b.revealed_a, b.a);
  }
}

TEST(BCBinding, FlipWithoutChangeIsHonest) {
  EXPECT_EQ(reject_rate({2, 1}, AliceStrategy::flip_after_input(1, 1), 2000, 3), 0.0);
}

TEST(BCBinding, TenDelayedBlocksRarelyPass) {
  const int trials = 20000;
  const double accept = 1.0 - reject_rate({2, 10}, AliceStrategy::delay_all(1), trials, 9);
  EXPECT_LE(accept, std::pow(0.75, 10) + 0.01);
}

TEST(VerifyBlock, EachCheckMatters) {
  const BitString y = bits_from_string("101");
  const BitString x = bits_from_string("110");  // decodes to 1
  const BitString a = bits_from_string("011");
  BitString b(3);
  for (int i = 0; i < 3; ++i) b[i] = a[i] ^ (x[i] & y[i]);
  const Bit A = parity(a);
  EXPECT_EQ(verify_block(y, b, A, 1, x, a), Verdict::Accept);
  EXPECT_EQ(verify_block(y, b, A, 0, x, a), Verdict::Reject);
  EXPECT_EQ(verify_block(y, b, A ^ 1, 1, x, a), Verdict::Reject);
  BitString x2 = x;
  x2[0] ^= 1;
  EXPECT_EQ(verify_block(y, b, A, decode_bits(x2), x2, a), Verdict::Reject);
}

TEST(BestGuessY, Shape) {
  EXPECT_EQ(best_guess_y(1), bits_from_string("001"));
  EXPECT_EQ(best_guess_y(3), bits_from_string("0000001"));
}

double single_block_accuracy(std::size_t n, const BitString& y, int trials,
                             std::uint64_t base) {
  int correct = 0;
  const BCParams p{n, 1};
  for (int t = 0; t < trials; ++t) {
    Parties r(base + t, p.total_boxes());
    const Bit c = r.alice.bit();
    const std::vector<PendingBlock> blocks =
        commit_phase(p, std::vector<AliceStrategy>{AliceStrategy::honest(c)},
                     BobStrategy::inner_product_guess(y), r.session, r.alice, r.bob);
    const BobBlockView view = blocks[0].bob_view();
    correct += bob_guess(std::span<const BobBlockView>(&view, 1)) == c;
  }
  return double(correct) / trials;
}

TEST(BobGuess, MatchesOracleOnSingleBlock) {
  const int trials = 40000;
  for (std::size_t n = 1; n <= 3; ++n) {
    const BitString y = best_guess_y(n);
    const double p = sim::exact_pcy(n, y, 0);
    const double sigma = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(single_block_accuracy(n, y, trials, 1000 * n), p, 3.5 * sigma) << n;
  }
}

TEST(BobGuess, ZeroYIsACoinFlip) {
  // y = 0 carries no information, so the guess is always 0
  const double acc = single_block_accuracy(2, BitString(5, 0), 40000, 11);
  EXPECT_NEAR(acc, 0.5, 0.01);
}

TEST(Concealing, WitnessBiasIsThreeQuartersForBothBits) {
  // every encoding of c at n = 1, y = 001: x.y equals c for 3 of 4
  const BitString y = bits_from_string("001");
  for (int c = 0; c <= 1; ++c) {
    int hits = 0;
    for (int m = 0; m < 4; ++m) {
      const BitString prefix{Bit(m & 1), Bit(m >> 1)};
      hits += inner_product(complete_encoding(Bit(c), prefix).bits(), y) == c;
    }
    EXPECT_EQ(hits, 3);
  }
}

TEST(Commitment, OpensToCommittedValue) {
  const BCParams p{1, 2};
  for (int t = 0; t < 100; ++t) {
    Parties r(t, p.total_boxes());
    Commitment com = Commitment::commit(p, t & 1, r.session, r.alice, r.bob);
    const ProtocolResult res = com.open(r.session, r.alice);
    EXPECT_EQ(res.verdict, Verdict::Accept);
    EXPECT_EQ(res.revealed_bit, t & 1);
  }
}

TEST(BCJson, CarriesFields) {
  const nlohmann::json j = to_json(run({1, 2}, AliceStrategy::honest(1), 4));
  ASSERT_TRUE(j.contains("blocks"));
  ASSERT_EQ(j["blocks"].size(), 2U);
  for (const char* key : {"x", "a", "A", "y", "b", "revealed_c", "revealed_x",
                          "revealed_a", "verdict", "strategy"}) {
    EXPECT_TRUE(j["blocks"][0].contains(key)) << key;
  }
  EXPECT_TRUE(j["blocks"][0]["x"].is_string());
}

}  // namespace
}  // namespace nlbox::bc
