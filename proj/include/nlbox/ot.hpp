#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbox/bc.hpp"
#include "nlbox/box.hpp"
#include "nlbox/common.hpp"
#include "nlbox/rng.hpp"
#include "nlbox/stats.hpp"

namespace nlbox::ot {

enum class Backend { Ideal, Nlbc };

/// 1-2 OT over 2n boxes; n surviving rounds, index sets of size n/3.
struct OTParams {
  std::size_t n = 3;
  Backend backend = Backend::Ideal;
  /// Block parameters of the commitment backend when backend == Nlbc.
  bc::BCParams bc{1, 2};

  /// n >= 3 and divisible by 3; bc params valid when used.
  void validate() const;
  std::size_t set_size() const noexcept { return n / 3; }
  /// Boxes run_ot will consume, including the commitment backend's.
  std::size_t boxes_required() const noexcept;
};

/// Bit commitments made by the OT receiver and opened to the sender.
class CommitmentBackend {
 public:
  using Handle = std::size_t;
  virtual ~CommitmentBackend() = default;
  virtual Handle commit(Bit value) = 0;
  /// The committed value if the verifier accepts the opening, otherwise
  /// nullopt. Each handle opens at most once.
  virtual std::optional<Bit> open(Handle handle) = 0;
};

/// A trusted registry: perfectly binding and concealing.
class IdealCommitments final : public CommitmentBackend {
 public:
  Handle commit(Bit value) override;
  std::optional<Bit> open(Handle handle) override;

 private:
  std::vector<std::optional<Bit>> values_;
};

/// k-block box commitments drawn from the shared session.
class NlbcCommitments final : public CommitmentBackend {
 public:
  NlbcCommitments(bc::BCParams params, BoxSession& session,
                  Rng& committer_rng, Rng& verifier_rng);
  Handle commit(Bit value) override;
  std::optional<Bit> open(Handle handle) override;

 private:
  bc::BCParams params_;
  BoxSession& session_;
  Rng& committer_rng_;
  Rng& verifier_rng_;
  std::vector<std::optional<bc::Commitment>> pending_;
};

/// Bob's delayed-box attack. For every index i in cheat_set he uses only
/// one of the boxes i, i+n in step 1 (which one is uniform), commits to
/// y'=1 and a random b for the other, and if that other round survives
/// he waits for Alice's y_i before using the box.
struct BobOTAttack {
  std::vector<std::size_t> cheat_set;

  static BobOTAttack first(std::size_t k);
  void validate(std::size_t n) const;
};

struct BobBehavior {
  std::optional<BobOTAttack> attack;

  static BobBehavior honest() { return {}; }
  static BobBehavior attacking(BobOTAttack a) { return {std::move(a)}; }
};

/// One of the 2n step-1 rounds.
struct BoxRound {
  Bit r0 = 0;
  Bit r1 = 0;
  Bit x = 0;
  Bit a = 0;
  std::optional<Bit> y_prime;  // Bob's real box input, once used
  std::optional<Bit> b;
  bool delayed = false;
  bool bob_used_in_step1 = false;
  Bit committed_y_prime = 0;
  Bit committed_b = 0;
  CommitmentBackend::Handle y_handle = 0;
  CommitmentBackend::Handle b_handle = 0;
};

/// Alice's cut-and-choose challenge for pair (i, i+n).
struct Challenge {
  std::size_t pair = 0;
  Bit k = 0;
  std::size_t opened = 0;
  std::optional<Bit> opened_y_prime;
  std::optional<Bit> opened_b;
  bool opened_delayed = false;
  bool passed = false;
};

/// A surviving round after relabelling.
struct OTRoundState {
  std::size_t source = 0;
  Bit r0 = 0;
  Bit r1 = 0;
  Bit x = 0;
  Bit y_prime = 0;
  Bit a = 0;
  Bit b = 0;
  Bit k_challenge = 0;
  Bit m = 0;
  Bit v = 0;
  Bit v_prime = 0;
  Bit y = 0;
  bool delayed = false;
};

enum class OutcomeKind { BobGets, AliceAborts, BobFails };

struct Outcome {
  OutcomeKind kind = OutcomeKind::BobFails;
  Bit value = 0;  // meaningful for BobGets
};

struct OTSession {
  OTParams params;
  Bit s0 = 0;
  Bit s1 = 0;
  Bit c = 0;
  std::vector<std::size_t> cheat_set;
  std::vector<BoxRound> box_rounds;
  std::vector<Challenge> challenges;
  std::vector<OTRoundState> rounds;
  std::vector<std::size_t> J0;
  std::vector<std::size_t> J1;
  std::optional<Bit> s_hat0;
  std::optional<Bit> s_hat1;
  Outcome outcome;
  /// Alice completed step 2 without aborting.
  bool passed_cut_and_choose = false;
  std::size_t matches = 0;  // #{i : y_i = y'_i}
  /// Bob built both sets from matching rounds and unmasked both secrets.
  bool bob_learned_both = false;
  std::optional<Bit> bob_other_secret;
};

/// Alice's acceptance test for Bob's announced sets.
bool valid_index_sets(std::size_t n, std::span<const std::size_t> J0,
                      std::span<const std::size_t> J1);

/// Runs 1-2 NLOT end to end. Alice is always honest. Boxes 0..2n-1 of the
/// run are taken from `session` first; an Nlbc backend allocates its own
/// boxes from the remainder.
OTSession run_ot(const OTParams& params, Bit s0, Bit s1, Bit c,
                 const BobBehavior& bob, BoxSession& session, Rng& alice_rng,
                 Rng& bob_rng);

/// Trials where Bob passed the cut-and-choose and unmasked both secrets.
sim::TrialSummary bob_learns_both(std::span<const OTSession> sessions);

enum class Receiver { Synchronous, Delaying };

/// Single-box erasure channel: nullopt means erased.
std::optional<Bit> single_box_erasure(Bit v, Receiver receiver,
                                      BoxSession& session, Rng& alice_rng,
                                      Rng& bob_rng);

/// OT built from one unprotected single-box 1-2 OT: the sender puts b
/// behind a random index k and announces k afterwards. nullopt means the
/// receiver learned nothing.
std::optional<Bit> ww_reduction_demo(Bit b, Receiver receiver,
                                     BoxSession& session, Rng& sender_rng,
                                     Rng& receiver_rng);

/// Everything Alice observes in one run, plus when Bob used his boxes.
struct AliceView {
  std::vector<Bit> y;
  std::vector<Bit> opened_y_prime;
  std::vector<Bit> opened_b;
  std::vector<std::size_t> J0;
  std::vector<std::size_t> J1;
  std::size_t bob_boxes_used_in_step1 = 0;
  std::size_t matches = 0;
};

AliceView alice_view(const OTSession& session);

struct StatisticComparison {
  std::string name;
  double mean0 = 0.0;
  double mean1 = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool pass = true;
};

struct ViewIndependenceReport {
  std::size_t trials0 = 0;
  std::size_t trials1 = 0;
  double z_threshold = 3.0;
  std::vector<StatisticComparison> statistics;
  bool pass = true;
};

/// Two-sample comparison of Alice's view statistics between runs with
/// c = 0 and c = 1. A statistic fails when the difference of means exceeds
/// z_threshold standard errors.
ViewIndependenceReport alice_view_independence(
    std::span<const OTSession> c0_runs, std::span<const OTSession> c1_runs,
    double z_threshold = 3.0);

std::string to_string(OutcomeKind k);
nlohmann::json to_json(const OTSession& s);
nlohmann::json to_json(const ViewIndependenceReport& r);

}  // namespace nlbox::ot
