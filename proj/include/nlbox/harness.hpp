#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbox/common.hpp"
#include "nlbox/ot.hpp"
#include "nlbox/stats.hpp"

namespace nlbox::sim {

enum class ScenarioKind {
  BCHonest,
  BCBinding,
  BCGuess,
  OTHonest,
  OTBobAttack,
  ErasureDemo,
  WWDemo,
  NoSignalingCheck,
};

std::string to_string(ScenarioKind k);
/// Throws std::invalid_argument for unknown names.
ScenarioKind scenario_kind_from_string(const std::string& name);

/// Which y the guessing verifier feeds into every block.
enum class GuessY { Best, Zero, Uniform };

struct ScenarioParams {
  /// Per-block n for BC scenarios, round parameter for OT scenarios.
  std::size_t n = 2;
  /// Number of commitment blocks.
  std::size_t k = 10;
  /// BCBinding: blocks where Alice delays all inputs (k*); nullopt = all.
  std::optional<std::size_t> delayed_blocks;
  /// BCBinding: input-flipping blocks committed to 0 (k0). The remaining
  /// k - k* - k0 flipping blocks are committed to 1.
  std::size_t zero_blocks = 0;
  /// BCBinding: bit Alice tries to reveal; nullopt alternates by trial.
  std::optional<Bit> reveal;
  GuessY guess_y = GuessY::Best;
  /// OTBobAttack: |C|.
  std::size_t cheat_rounds = 0;
  ot::Backend backend = ot::Backend::Ideal;
  std::size_t bc_n = 1;
  std::size_t bc_k = 2;
  ot::Receiver receiver = ot::Receiver::Synchronous;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::BCHonest;
  ScenarioParams params;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Upper bound on threads used for the trials. Results do not depend
  /// on it.
  unsigned workers = 1;
  /// Attach wall-clock runtime to the summary (makes output non-repeatable).
  bool timing = false;

  /// Throws std::invalid_argument when the parameters violate the target
  /// protocol's preconditions.
  void validate() const;
};

nlohmann::json params_to_json(const Scenario& s);

struct TrialRecord {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  bool event = false;
  std::string outcome;
  std::map<std::string, std::int64_t> fields;
};

nlohmann::json to_json(const TrialRecord& r);

struct ScenarioResult {
  TrialSummary summary;
  std::vector<TrialRecord> records;
};

/// Seed of trial `index`; trials are mutually independent.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed, index);
}

/// Runs `trials` independent protocol executions and compares the rate
/// of the scenario's event against its theoretical value. Aborted runs are
/// recorded as such; in adversarial scenarios they count against the
/// adversary.
ScenarioResult run_scenario(const Scenario& s);

// Theoretical values attached to scenarios.
double bc_delay_bound(std::size_t k);                    // (3/4)^k
double bc_binding_sum_bound(std::size_t k);              // 1 + (1/2)^(k-2)
double bc_mixed_binding_sum(std::size_t k_star, std::size_t k0,
                            std::size_t k1);             // (3/4)^k*((1/2)^k1+(1/2)^k0)
double bc_guess_bound(std::size_t n, std::size_t k);     // 1/2 + k/2^(n+1)
double ot_honest_failure_bound(std::size_t n);           // e^(-n/18)
double ot_attack_bound(std::size_t n, std::size_t k);
/// Exact success probability of the majority-vote guess with k blocks of
/// per-block accuracy p (ties guess 0, which is right half the time).
double majority_guess_accuracy(double p, std::size_t k);

struct CellStat {
  Party party = Party::Alice;
  Bit local_input = 0;
  /// nullopt: the remote party never uses the box.
  std::optional<Bit> remote_input;
  std::uint64_t trials = 0;
  std::uint64_t ones = 0;
  double frequency = 0.0;
  bool pass = false;
};

struct NoSignalingReport {
  double tolerance = 0.005;
  std::vector<CellStat> cells;
  /// First-mover outputs were identical whatever the remote did later.
  bool structural_ok = false;
  std::uint64_t correlation_checks = 0;
  std::uint64_t correlation_failures = 0;
  bool pass = false;
};

/// Output frequency of each party for every (local input, remote input)
/// combination plus the never-used remote case. Entry order alternates
/// between trials so both first and second movers are sampled.
NoSignalingReport no_signaling_audit(std::uint64_t trials_per_cell,
                                     std::uint64_t seed,
                                     double tolerance = 0.005);

struct ChshReport {
  std::array<std::uint64_t, 4> trials{};     // indexed by 2x + y
  std::array<std::uint64_t, 4> satisfied{};  // a ^ b == x & y
  double value = 0.0;                        // sum of the four win rates
};

/// Uses `boxes` boxes, cycling through the four input pairs.
ChshReport chsh_audit(std::uint64_t boxes, std::uint64_t seed);

nlohmann::json to_json(const NoSignalingReport& r);
nlohmann::json to_json(const ChshReport& r);

}  // namespace nlbox::sim
