#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace nlbox::sim {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval at 95% confidence. Endpoints are pinned to 0 and 1
/// exactly when no or all trials succeed.
Interval wilson95(std::uint64_t successes, std::uint64_t trials);

/// Standard error of a Bernoulli proportion estimate.
double binomial_sigma(double p, std::uint64_t trials);

enum class BoundSense { AtMost, AtLeast, Equals };

/// A theoretical value the measured rate is compared against.
struct Bound {
  std::string formula;
  double value = 0.0;
  BoundSense sense = BoundSense::AtMost;
};

enum class BoundVerdict { WithinBound, Violates, NoBound };

/// Violates iff the Wilson interval lies entirely on the wrong side of the
/// bound (or, for Equals, excludes it).
BoundVerdict judge(const Interval& ci, const std::optional<Bound>& bound);

std::string to_string(BoundSense s);
std::string to_string(BoundVerdict v);

/// Aggregated Monte Carlo result. `event` names what `successes` counts.
struct TrialSummary {
  std::string scenario;
  std::string event;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double estimate = 0.0;
  Interval ci95;
  std::optional<Bound> bound;
  BoundVerdict verdict = BoundVerdict::NoBound;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json details = nlohmann::json::object();
  std::optional<double> runtime_ms;
};

TrialSummary summarize(std::string scenario, std::string event,
                       std::uint64_t successes, std::uint64_t trials,
                       std::optional<Bound> bound);

nlohmann::json to_json(const TrialSummary& s);

}  // namespace nlbox::sim
