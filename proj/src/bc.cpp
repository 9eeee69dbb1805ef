#include "nlbox/bc.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "nlbox/oracle.hpp"

namespace nlbox::bc {

void BCParams::validate() const {
  if (n < 1) throw std::invalid_argument("BCParams: n must be >= 1");
  if (k < 1) throw std::invalid_argument("BCParams: k must be >= 1");
}

namespace {

// Lowest index whose flip changes the decoded bit. The last position
// always qualifies, so this never fails.
std::size_t lowest_toggling_index(const BitString& x) {
  const Bit before = decode_bits(x);
  BitString probe = x;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    probe[i] ^= 1U;
    const bool toggles = decode_bits(probe) != before;
    probe[i] ^= 1U;
    if (toggles) return i;
  }
  return x.size() - 1;
}

}  // namespace

PendingBlock commit_block(std::size_t n, const AliceStrategy& alice,
                          const BobStrategy& bob, BoxSession& session,
                          Rng& alice_rng, Rng& bob_rng) {
  const std::size_t len = 2 * n + 1;
  if (!bob.y.empty() && bob.y.size() != len) {
    throw std::invalid_argument("BobStrategy: y must have length 2n+1");
  }
  if (alice.kind == AliceKind::DelayAll && n < 1) {
    throw std::invalid_argument("DelayAll needs at least 3 boxes (n >= 1)");
  }
  PendingBlock block;
  block.n_ = n;
  block.alice_ = alice;
  block.first_box_ = session.allocate(len);

  // Alice's commit move
  if (alice.kind == AliceKind::DelayAll) {
    block.A_ = alice_rng.bit();
  } else {
    block.x_ = encode(alice.commit_bit, n, alice_rng).bits();
    block.a_.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      block.a_[i] =
          session.enter_input(block.first_box_ + i, Party::Alice, block.x_[i]);
    }
    block.A_ = parity(block.a_);
  }

  // Bob's inputs, after receiving A
  block.y_ = bob.y.empty() ? bob_rng.bits(len) : bob.y;
  block.b_.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    block.b_[i] =
        session.enter_input(block.first_box_ + i, Party::Bob, block.y_[i]);
  }
  return block;
}

BlockTranscript reveal_block(PendingBlock block, BoxSession& session,
                             Rng& alice_rng) {
  const std::size_t n = block.n_;
  const std::size_t len = 2 * n + 1;
  const AliceStrategy& alice = block.alice_;

  BlockTranscript t;
  t.n = n;
  t.strategy = alice.kind;
  t.A = block.A_;
  t.y = std::move(block.y_);
  t.b = std::move(block.b_);

  switch (alice.kind) {
    case AliceKind::Honest:
      t.x = std::move(block.x_);
      t.a = std::move(block.a_);
      t.revealed_c = alice.commit_bit;
      t.revealed_x = t.x;
      t.revealed_a = t.a;
      break;
    case AliceKind::FlipAfterInput: {
      t.x = std::move(block.x_);
      t.a = std::move(block.a_);
      t.revealed_c = alice.reveal_bit;
      t.revealed_x = t.x;
      t.revealed_a = t.a;
      if (decode_bits(t.x) != alice.reveal_bit) {
        t.revealed_x[lowest_toggling_index(t.x)] ^= 1U;
      }
      break;
    }
    case AliceKind::DelayAll: {
      BitString prefix(2 * n, 0);
      for (std::size_t i = 2; i < 2 * n; ++i) prefix[i] = alice_rng.bit();
      t.x = complete_encoding(alice.reveal_bit, prefix).bits();
      t.a.resize(len);
      for (std::size_t i = 0; i < len; ++i) {
        t.a[i] = session.enter_input(block.first_box_ + i, Party::Alice, t.x[i]);
      }
      t.revealed_c = alice.reveal_bit;
      t.revealed_x = t.x;
      t.revealed_a = t.a;
      if (parity(t.a) != t.A) {
        // x starts with 00, so 10 still contributes nothing to count11
        t.revealed_x[0] ^= 1U;
        t.revealed_a[0] ^= 1U;
      }
      break;
    }
  }
  t.verdict = verify_block(t.y, t.b, t.A, t.revealed_c, t.revealed_x,
                           t.revealed_a);
  return t;
}

Verdict verify_block(std::span<const Bit> y, std::span<const Bit> b, Bit A,
                     Bit revealed_c, std::span<const Bit> revealed_x,
                     std::span<const Bit> revealed_a) {
  const std::size_t len = y.size();
  if (len % 2 == 0 || b.size() != len || revealed_x.size() != len ||
      revealed_a.size() != len) {
    return Verdict::Reject;
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (revealed_x[i] > 1 || revealed_a[i] > 1) return Verdict::Reject;
    if ((revealed_x[i] & y[i]) != (revealed_a[i] ^ b[i])) {
      return Verdict::Reject;
    }
  }
  if (decode_bits(revealed_x) != revealed_c) return Verdict::Reject;
  if (parity(revealed_a) != A) return Verdict::Reject;
  return Verdict::Accept;
}

BlockTranscript run_block(const BCParams& params, const AliceStrategy& alice,
                          const BobStrategy& bob, BoxSession& session,
                          Rng& alice_rng, Rng& bob_rng) {
  params.validate();
  if (params.k != 1) throw std::invalid_argument("run_block: k must be 1");
  if (session.unallocated() < params.boxes_per_block()) {
    throw std::invalid_argument("run_block: not enough unused boxes");
  }
  return reveal_block(
      commit_block(params.n, alice, bob, session, alice_rng, bob_rng),
      session, alice_rng);
}

std::vector<PendingBlock> commit_phase(const BCParams& params,
                                       std::span<const AliceStrategy> alice,
                                       const BobStrategy& bob,
                                       BoxSession& session, Rng& alice_rng,
                                       Rng& bob_rng) {
  params.validate();
  if (alice.size() != params.k) {
    throw std::invalid_argument("run_protocol: need one strategy per block");
  }
  const bool all_honest =
      std::all_of(alice.begin(), alice.end(), [](const AliceStrategy& s) {
        return s.kind == AliceKind::Honest;
      });
  if (all_honest) {
    for (const auto& s : alice) {
      if (s.commit_bit != alice.front().commit_bit) {
        throw std::invalid_argument(
            "run_protocol: honest Alice must commit to the same bit in every "
            "block");
      }
    }
  }
  if (session.unallocated() < params.total_boxes()) {
    throw std::invalid_argument("run_protocol: not enough unused boxes");
  }
  std::vector<PendingBlock> blocks;
  blocks.reserve(params.k);
  for (const auto& s : alice) {
    blocks.push_back(
        commit_block(params.n, s, bob, session, alice_rng, bob_rng));
  }
  return blocks;
}

ProtocolResult reveal_phase(std::vector<PendingBlock> blocks,
                            BoxSession& session, Rng& alice_rng) {
  ProtocolResult result;
  result.blocks.reserve(blocks.size());
  for (auto& block : blocks) {
    result.blocks.push_back(reveal_block(std::move(block), session, alice_rng));
  }
  if (result.blocks.empty()) return result;
  result.revealed_bit = result.blocks.front().revealed_c;
  const bool ok = std::all_of(
      result.blocks.begin(), result.blocks.end(), [&](const BlockTranscript& t) {
        return t.verdict == Verdict::Accept &&
               t.revealed_c == result.revealed_bit;
      });
  result.verdict = ok ? Verdict::Accept : Verdict::Reject;
  return result;
}

ProtocolResult run_protocol(const BCParams& params,
                            std::span<const AliceStrategy> alice,
                            const BobStrategy& bob, BoxSession& session,
                            Rng& alice_rng, Rng& bob_rng) {
  return reveal_phase(
      commit_phase(params, alice, bob, session, alice_rng, bob_rng), session,
      alice_rng);
}

ProtocolResult run_protocol(const BCParams& params, const AliceStrategy& alice,
                            const BobStrategy& bob, BoxSession& session,
                            Rng& alice_rng, Rng& bob_rng) {
  params.validate();
  const std::vector<AliceStrategy> per_block(params.k, alice);
  return run_protocol(params, per_block, bob, session, alice_rng, bob_rng);
}

Bit bob_guess(std::span<const BobBlockView> views) {
  long score = 0;
  for (const auto& v : views) {
    if (v.y.size() % 2 == 0 || v.b.size() != v.y.size()) {
      throw std::invalid_argument("bob_guess: malformed block view");
    }
    if (std::none_of(v.y.begin(), v.y.end(), [](Bit b) { return b != 0; })) {
      continue;
    }
    const std::size_t n = (v.y.size() - 1) / 2;
    // p^0_y == p^1_y, so the c = 0 entry decides the direction for both
    const auto bias = sim::exact_pcy_fraction(n, v.y, 0);
    if (2 * bias.favorable == bias.total) continue;
    const Bit ip = static_cast<Bit>(v.A ^ parity(v.b));
    const Bit vote = 2 * bias.favorable > bias.total ? ip : static_cast<Bit>(ip ^ 1U);
    score += vote ? 1 : -1;
  }
  return score > 0 ? 1 : 0;
}

BitString best_guess_y(std::size_t n) {
  BitString y(2 * n + 1, 0);
  y.back() = 1;
  return y;
}

Commitment Commitment::commit(const BCParams& params, Bit value,
                              BoxSession& session, Rng& committer_rng,
                              Rng& verifier_rng) {
  const std::vector<AliceStrategy> per_block(params.k,
                                             AliceStrategy::honest(value));
  Commitment c;
  c.blocks_ = commit_phase(params, per_block, BobStrategy::honest(), session,
                           committer_rng, verifier_rng);
  return c;
}

ProtocolResult Commitment::open(BoxSession& session, Rng& committer_rng) {
  if (blocks_.empty()) {
    throw ProtocolViolation("commitment already opened");
  }
  return reveal_phase(std::exchange(blocks_, {}), session, committer_rng);
}

}  // namespace nlbox::bc

namespace nlbox::bc {

std::string to_string(AliceKind k) {
  switch (k) {
    case AliceKind::Honest:
      return "Honest";
    case AliceKind::FlipAfterInput:
      return "FlipAfterInput";
    case AliceKind::DelayAll:
      return "DelayAll";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  return v == Verdict::Accept ? "Accept" : "Reject";
}

nlohmann::json to_json(const BlockTranscript& t) {
  return {{"n", t.n},
          {"strategy", to_string(t.strategy)},
          {"x", nlbox::to_string(t.x)},
          {"a", nlbox::to_string(t.a)},
          {"A", t.A},
          {"y", nlbox::to_string(t.y)},
          {"b", nlbox::to_string(t.b)},
          {"revealed_c", t.revealed_c},
          {"revealed_x", nlbox::to_string(t.revealed_x)},
          {"revealed_a", nlbox::to_string(t.revealed_a)},
          {"verdict", to_string(t.verdict)}};
}

nlohmann::json to_json(const ProtocolResult& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks) blocks.push_back(to_json(b));
  return {{"blocks", std::move(blocks)},
          {"revealed_bit", r.revealed_bit},
          {"verdict", to_string(r.verdict)}};
}

}  // namespace nlbox::bc
