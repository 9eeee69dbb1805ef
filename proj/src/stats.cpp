#include "nlbox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace nlbox::sim {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

Interval wilson95(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson95: no trials");
  if (successes > trials) {
    throw std::invalid_argument("wilson95: successes exceed trials");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half =
      kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  Interval ci{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) ci.lo = 0.0;
  if (successes == trials) ci.hi = 1.0;
  // floating point can leave the point estimate a hair outside
  ci.lo = std::min(ci.lo, p);
  ci.hi = std::max(ci.hi, p);
  return ci;
}

double binomial_sigma(double p, std::uint64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

BoundVerdict judge(const Interval& ci, const std::optional<Bound>& bound) {
  if (!bound) return BoundVerdict::NoBound;
  bool ok = true;
  switch (bound->sense) {
    case BoundSense::AtMost:
      ok = ci.lo <= bound->value;
      break;
    case BoundSense::AtLeast:
      ok = ci.hi >= bound->value;
      break;
    case BoundSense::Equals:
      ok = ci.lo <= bound->value && bound->value <= ci.hi;
      break;
  }
  return ok ? BoundVerdict::WithinBound : BoundVerdict::Violates;
}

std::string to_string(BoundSense s) {
  switch (s) {
    case BoundSense::AtMost:
      return "at_most";
    case BoundSense::AtLeast:
      return "at_least";
    case BoundSense::Equals:
      return "equals";
  }
  return "unknown";
}

std::string to_string(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::WithinBound:
      return "WithinBound";
    case BoundVerdict::Violates:
      return "Violates";
    case BoundVerdict::NoBound:
      return "NoBound";
  }
  return "unknown";
}

TrialSummary summarize(std::string scenario, std::string event,
                       std::uint64_t successes, std::uint64_t trials,
                       std::optional<Bound> bound) {
  TrialSummary s;
  s.scenario = std::move(scenario);
  s.event = std::move(event);
  s.trials = trials;
  s.successes = successes;
  s.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  s.ci95 = wilson95(successes, trials);
  s.bound = std::move(bound);
  s.verdict = judge(s.ci95, s.bound);
  return s;
}

nlohmann::json to_json(const TrialSummary& s) {
  nlohmann::json j;
  j["scenario"] = s.scenario;
  j["event"] = s.event;
  j["params"] = s.params;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["estimate"] = s.estimate;
  j["ci95"] = {s.ci95.lo, s.ci95.hi};
  if (s.bound) {
    j["bound"] = {{"formula", s.bound->formula},
                  {"value", s.bound->value},
                  {"sense", to_string(s.bound->sense)}};
  } else {
    j["bound"] = nullptr;
  }
  j["verdict"] = to_string(s.verdict);
  j["seed"] = s.seed;
  j["details"] = s.details;
  if (s.runtime_ms) j["runtime_ms"] = *s.runtime_ms;
  return j;
}

}  // namespace nlbox::sim
