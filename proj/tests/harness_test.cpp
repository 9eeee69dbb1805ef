#include "nlbox/harness.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "nlbox/oracle.hpp"

namespace nlbox::sim {
namespace {

Scenario make(ScenarioKind kind, std::uint64_t trials, std::uint64_t seed) {
  Scenario s;
  s.kind = kind;
  s.trials = trials;
  s.seed = seed;
  return s;
}

TEST(Bounds, HandExpandedValues) {
  EXPECT_DOUBLE_EQ(bc_delay_bound(1), 0.75);
  EXPECT_DOUBLE_EQ(bc_delay_bound(2), 0.5625);
  EXPECT_DOUBLE_EQ(bc_delay_bound(10), 0.056313514709472656);

  EXPECT_DOUBLE_EQ(bc_binding_sum_bound(2), 2.0);
  EXPECT_DOUBLE_EQ(bc_binding_sum_bound(3), 1.5);
  EXPECT_DOUBLE_EQ(bc_binding_sum_bound(10), 1.00390625);

  EXPECT_DOUBLE_EQ(bc_mixed_binding_sum(0, 0, 10), 1.0 + 1.0 / 1024);
  EXPECT_DOUBLE_EQ(bc_mixed_binding_sum(2, 0, 8), 0.5625 * (1.0 + 1.0 / 256));
  EXPECT_DOUBLE_EQ(bc_mixed_binding_sum(1, 3, 6), 0.75 * (1.0 / 64 + 1.0 / 8));

  EXPECT_DOUBLE_EQ(bc_guess_bound(3, 4), 0.75);
  EXPECT_DOUBLE_EQ(bc_guess_bound(1, 1), 0.75);
  EXPECT_DOUBLE_EQ(bc_guess_bound(2, 2), 0.75);

  EXPECT_DOUBLE_EQ(ot_honest_failure_bound(36), 0.1353352832366127);
  EXPECT_DOUBLE_EQ(ot_honest_failure_bound(18), std::exp(-1.0));
  EXPECT_DOUBLE_EQ(ot_honest_failure_bound(0), 1.0);

  EXPECT_NEAR(ot_attack_bound(36, 6), 0.05360609875097543, 1e-15);
  EXPECT_DOUBLE_EQ(ot_attack_bound(9, 3), std::pow(0.75, 3));
  EXPECT_DOUBLE_EQ(ot_attack_bound(3, 3), std::pow(0.75, 3));
}

TEST(Bounds, MajorityAccuracy) {
  EXPECT_DOUBLE_EQ(majority_guess_accuracy(9.0 / 16, 1), 0.5625);
  EXPECT_DOUBLE_EQ(majority_guess_accuracy(9.0 / 16, 4), 0.59326171875);
  EXPECT_DOUBLE_EQ(majority_guess_accuracy(0.5, 7), 0.5);
  EXPECT_DOUBLE_EQ(majority_guess_accuracy(1.0, 6), 1.0);
  for (std::size_t k = 1; k <= 12; ++k) {
    EXPECT_LE(majority_guess_accuracy(9.0 / 16, k), bc_guess_bound(3, k) + 1e-12);
  }
}

TEST(Wilson, Properties) {
  const Interval none = wilson95(0, 100);
  EXPECT_EQ(none.lo, 0.0);
  const Interval all = wilson95(100, 100);
  EXPECT_EQ(all.hi, 1.0);
  for (std::uint64_t s : {1, 13, 50, 99}) {
    const Interval i = wilson95(s, 100);
    EXPECT_LT(i.lo, s / 100.0);
    EXPECT_GT(i.hi, s / 100.0);
    EXPECT_GE(i.lo, 0.0);
    EXPECT_LE(i.hi, 1.0);
  }
  // narrower with more trials
  EXPECT_LT(wilson95(5000, 10000).hi - wilson95(5000, 10000).lo,
            wilson95(50, 100).hi - wilson95(50, 100).lo);
  EXPECT_THROW(wilson95(0, 0), std::invalid_argument);
}

TEST(Judge, Senses) {
  const Interval ci{0.4, 0.6};
  EXPECT_EQ(judge(ci, std::nullopt), BoundVerdict::NoBound);
  EXPECT_EQ(judge(ci, Bound{"", 0.5, BoundSense::AtMost}), BoundVerdict::WithinBound);
  EXPECT_EQ(judge(ci, Bound{"", 0.3, BoundSense::AtMost}), BoundVerdict::Violates);
  EXPECT_EQ(judge(ci, Bound{"", 0.7, BoundSense::AtLeast}), BoundVerdict::Violates);
  EXPECT_EQ(judge(ci, Bound{"", 0.5, BoundSense::Equals}), BoundVerdict::WithinBound);
  EXPECT_EQ(judge(ci, Bound{"", 0.65, BoundSense::Equals}), BoundVerdict::Violates);
}

TEST(Scenario, NamesRoundTrip) {
  for (ScenarioKind k :
       {ScenarioKind::BCHonest, ScenarioKind::BCBinding, ScenarioKind::BCGuess,
        ScenarioKind::OTHonest, ScenarioKind::OTBobAttack, ScenarioKind::ErasureDemo,
        ScenarioKind::WWDemo, ScenarioKind::NoSignalingCheck}) {
    EXPECT_EQ(scenario_kind_from_string(to_string(k)), k);
  }
  EXPECT_THROW(scenario_kind_from_string("nope"), std::invalid_argument);
}

TEST(Scenario, ValidationRejectsBadParams) {
  Scenario s = make(ScenarioKind::OTHonest, 10, 1);
  s.params.n = 10;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = make(ScenarioKind::BCBinding, 10, 1);
  s.params.delayed_blocks = 11;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = make(ScenarioKind::BCHonest, 0, 1);
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Scenario, SameSeedSameJson) {
  for (ScenarioKind k : {ScenarioKind::BCBinding, ScenarioKind::BCGuess,
                         ScenarioKind::ErasureDemo}) {
    Scenario s = make(k, 2000, 99);
    s.params.n = 2;
    s.params.k = 3;
    const auto a = run_scenario(s);
    const auto b = run_scenario(s);
    EXPECT_EQ(to_json(a.summary).dump(), to_json(b.summary).dump());
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      ASSERT_EQ(to_json(a.records[i]).dump(), to_json(b.records[i]).dump());
    }
  }
}

TEST(Scenario, WorkerCountDoesNotChangeResult) {
  Scenario s = make(ScenarioKind::OTBobAttack, 3000, 5);
  s.params.n = 9;
  s.params.cheat_rounds = 2;
  s.workers = 1;
  const std::string one = to_json(run_scenario(s).summary).dump();
  s.workers = 4;
  EXPECT_EQ(to_json(run_scenario(s).summary).dump(), one);
}

TEST(Scenario, DifferentSeedsDiffer) {
  Scenario s = make(ScenarioKind::BCGuess, 2000, 1);
  const auto a = run_scenario(s).summary.successes;
  s.seed = 2;
  EXPECT_NE(a, run_scenario(s).summary.successes);
}

TEST(Scenario, TrialSeedsAreDistinct) {
  EXPECT_NE(trial_seed(1, 0), trial_seed(1, 1));
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

TEST(Scenario, OracleAgreesWithSimulationOnSingleBlock) {
  for (std::size_t n = 1; n <= 3; ++n) {
    Scenario s = make(ScenarioKind::BCGuess, 40000, 100 + n);
    s.params.n = n;
    s.params.k = 1;
    const TrialSummary sum = run_scenario(s).summary;
    const double p = exact_pcy(n, bc::best_guess_y(n), 0);
    EXPECT_NEAR(sum.estimate, p, 3 * binomial_sigma(p, s.trials)) << "n=" << n;
    EXPECT_DOUBLE_EQ(sum.details["exact_block_accuracy"].get<double>(), p);
  }
}

TEST(Scenario, HonestScenariosCarryTheirBounds) {
  Scenario s = make(ScenarioKind::BCHonest, 500, 3);
  TrialSummary sum = run_scenario(s).summary;
  EXPECT_EQ(sum.successes, 500U);
  EXPECT_EQ(sum.verdict, BoundVerdict::WithinBound);

  s = make(ScenarioKind::OTHonest, 500, 3);
  s.params.n = 36;
  sum = run_scenario(s).summary;
  ASSERT_TRUE(sum.bound);
  EXPECT_DOUBLE_EQ(sum.bound->value, ot_honest_failure_bound(36));
  EXPECT_DOUBLE_EQ(sum.details["exact_failure"].get<double>(), 0.014408359827939421);
  EXPECT_EQ(sum.details["wrong_outputs"].get<int>(), 0);
}

TEST(Scenario, BindingScenarioReportsSum) {
  Scenario s = make(ScenarioKind::BCBinding, 4000, 8);
  s.params.delayed_blocks = 1;
  const TrialSummary sum = run_scenario(s).summary;
  EXPECT_TRUE(sum.details.contains("binding_sum"));
  EXPECT_TRUE(sum.details.contains("binding_sum_headline_bound"));
}

TEST(NoSignaling, AuditPasses) {
  const NoSignalingReport r = no_signaling_audit(20000, 4, 0.015);
  EXPECT_EQ(r.cells.size(), 12U);
  EXPECT_TRUE(r.structural_ok);
  EXPECT_EQ(r.correlation_failures, 0U);
  EXPECT_TRUE(r.pass);
}

TEST(Chsh, Saturates) {
  const ChshReport r = chsh_audit(40000, 6);
  for (int cell = 0; cell < 4; ++cell) {
    EXPECT_EQ(r.satisfied[cell], r.trials[cell]);
    EXPECT_GT(r.trials[cell], 0U);
  }
  EXPECT_DOUBLE_EQ(r.value, 4.0);
}

}  // namespace
}  // namespace nlbox::sim
