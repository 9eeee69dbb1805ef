#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbox/box.hpp"
#include "nlbox/common.hpp"
#include "nlbox/parity.hpp"
#include "nlbox/rng.hpp"

namespace nlbox::bc {

/// k blocks of 2n+1 boxes each.
struct BCParams {
  std::size_t n = 1;
  std::size_t k = 1;

  /// Throws std::invalid_argument unless n >= 1 and k >= 1. The delaying
  /// committer needs at least three boxes per block, hence n >= 1.
  void validate() const;
  std::size_t boxes_per_block() const noexcept { return 2 * n + 1; }
  std::size_t total_boxes() const noexcept { return k * boxes_per_block(); }
};

enum class AliceKind { Honest, FlipAfterInput, DelayAll };

/// Committer behaviour for one block.
///  - Honest: commits to and reveals commit_bit.
///  - FlipAfterInput: uses the boxes honestly on an encoding of commit_bit,
///    then at reveal flips the lowest-index x_i that toggles the decoded
///    bit (leaving a_i alone) whenever reveal_bit differs.
///  - DelayAll: announces a random parity without touching the boxes and
///    only uses them at reveal time, on a string 00... that encodes
///    reveal_bit; if the parity misses, x_1 and a_1 are both flipped.
struct AliceStrategy {
  AliceKind kind = AliceKind::Honest;
  Bit commit_bit = 0;
  Bit reveal_bit = 0;

  static AliceStrategy honest(Bit c) { return {AliceKind::Honest, c, c}; }
  static AliceStrategy flip_after_input(Bit c, Bit c_prime) {
    return {AliceKind::FlipAfterInput, c, c_prime};
  }
  static AliceStrategy delay_all(Bit c_prime) {
    return {AliceKind::DelayAll, 0, c_prime};
  }
};

enum class BobKind { Honest, InnerProductGuess };

/// Verifier behaviour. Both kinds verify honestly at reveal time; the
/// guessing Bob additionally feeds a chosen y into every block (empty y
/// means uniform, as an honest Bob would).
struct BobStrategy {
  BobKind kind = BobKind::Honest;
  BitString y;

  static BobStrategy honest() { return {}; }
  static BobStrategy inner_product_guess(BitString y) {
    return {BobKind::InnerProductGuess, std::move(y)};
  }
};

enum class Verdict { Accept, Reject };

struct BlockTranscript {
  std::size_t n = 0;
  AliceKind strategy = AliceKind::Honest;
  BitString x;  // string Alice entered into her boxes
  BitString a;
  Bit A = 0;
  BitString y;
  BitString b;
  Bit revealed_c = 0;
  BitString revealed_x;
  BitString revealed_a;
  Verdict verdict = Verdict::Reject;
};

/// Bob's information about a committed block before the reveal.
struct BobBlockView {
  BitString y;
  BitString b;
  Bit A = 0;
};

/// A block after its commit phase.
class PendingBlock {
 public:
  BobBlockView bob_view() const { return {y_, b_, A_}; }
  std::size_t n() const noexcept { return n_; }
  const AliceStrategy& strategy() const noexcept { return alice_; }

 private:
  friend PendingBlock commit_block(std::size_t, const AliceStrategy&,
                                   const BobStrategy&, BoxSession&, Rng&,
                                   Rng&);
  friend BlockTranscript reveal_block(PendingBlock, BoxSession&, Rng&);

  std::size_t n_ = 0;
  AliceStrategy alice_;
  BoxId first_box_ = 0;
  BitString x_;
  BitString a_;
  Bit A_ = 0;
  BitString y_;
  BitString b_;
};

/// Runs 1-commit on 2n+1 freshly allocated boxes of `session`.
PendingBlock commit_block(std::size_t n, const AliceStrategy& alice,
                          const BobStrategy& bob, BoxSession& session,
                          Rng& alice_rng, Rng& bob_rng);

/// Runs 1-reveal and Bob's verification.
BlockTranscript reveal_block(PendingBlock block, BoxSession& session,
                             Rng& alice_rng);

/// Bob's acceptance test for one block: x_i.y_i = a_i ^ b_i for all i,
/// the revealed string decodes to the revealed bit, and the revealed
/// outputs have the announced parity.
Verdict verify_block(std::span<const Bit> y, std::span<const Bit> b, Bit A,
                     Bit revealed_c, std::span<const Bit> revealed_x,
                     std::span<const Bit> revealed_a);

/// Commit and reveal of a single block; params.k must be 1.
BlockTranscript run_block(const BCParams& params, const AliceStrategy& alice,
                          const BobStrategy& bob, BoxSession& session,
                          Rng& alice_rng, Rng& bob_rng);

struct ProtocolResult {
  std::vector<BlockTranscript> blocks;
  Verdict verdict = Verdict::Reject;
  /// Bit Alice revealed in the first block.
  Bit revealed_bit = 0;
};

/// All k commits followed by all k reveals. Accepts iff every block
/// accepts and all revealed bits agree.
std::vector<PendingBlock> commit_phase(const BCParams& params,
                                       std::span<const AliceStrategy> alice,
                                       const BobStrategy& bob,
                                       BoxSession& session, Rng& alice_rng,
                                       Rng& bob_rng);
ProtocolResult reveal_phase(std::vector<PendingBlock> blocks,
                            BoxSession& session, Rng& alice_rng);

/// `alice` holds one strategy per block (size k). An all-honest Alice
/// must use the same bit in every block.
ProtocolResult run_protocol(const BCParams& params,
                            std::span<const AliceStrategy> alice,
                            const BobStrategy& bob, BoxSession& session,
                            Rng& alice_rng, Rng& bob_rng);

ProtocolResult run_protocol(const BCParams& params, const AliceStrategy& alice,
                            const BobStrategy& bob, BoxSession& session,
                            Rng& alice_rng, Rng& bob_rng);

/// Bob's pre-reveal guess of c. Each block gives him x.y = A ^ (xor of b);
/// the exact bias of that bit toward c decides whether it votes for x.y
/// or its complement. Blocks with y = 0 or no bias abstain. Majority
/// vote; a tie (or no votes) guesses 0.
Bit bob_guess(std::span<const BobBlockView> views);

/// A y that maximizes |p^c_y - 1/2|: 0^{2n}1.
BitString best_guess_y(std::size_t n);

/// Honest committer's k-block commitment that is opened later. Used as a
/// commitment backend by the OT protocol, where the roles are swapped.
class Commitment {
 public:
  static Commitment commit(const BCParams& params, Bit value,
                           BoxSession& session, Rng& committer_rng,
                           Rng& verifier_rng);

  ProtocolResult open(BoxSession& session, Rng& committer_rng);

 private:
  std::vector<PendingBlock> blocks_;
};

std::string to_string(AliceKind k);
std::string to_string(Verdict v);

/// Bit strings are rendered as "0101" text; field names follow
/// BlockTranscript.
nlohmann::json to_json(const BlockTranscript& t);
nlohmann::json to_json(const ProtocolResult& r);

}  // namespace nlbox::bc
