#include "nlbox/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <utility>

#include "nlbox/bc.hpp"
#include "nlbox/box.hpp"
#include "nlbox/oracle.hpp"
#include "nlbox/rng.hpp"

namespace nlbox::sim {

namespace {

const std::pair<ScenarioKind, const char*> kKindNames[] = {
    {ScenarioKind::BCHonest, "bc-honest"},
    {ScenarioKind::BCBinding, "bc-binding"},
    {ScenarioKind::BCGuess, "bc-guess"},
    {ScenarioKind::OTHonest, "ot-honest"},
    {ScenarioKind::OTBobAttack, "ot-attack"},
    {ScenarioKind::ErasureDemo, "demo-erasure"},
    {ScenarioKind::WWDemo, "demo-ww-reduction"},
    {ScenarioKind::NoSignalingCheck, "audit-no-signaling"},
};

const char* guess_y_name(GuessY g) {
  switch (g) {
    case GuessY::Best:
      return "best";
    case GuessY::Zero:
      return "zero";
    case GuessY::Uniform:
      return "uniform";
  }
  return "best";
}

// Per-trial randomness: one box session and one generator per party.
struct TrialContext {
  explicit TrialContext(std::uint64_t seed, std::size_t boxes)
      : session(derive_seed(seed, 0), boxes),
        alice(derive_seed(seed, 1)),
        bob(derive_seed(seed, 2)) {}
  BoxSession session;
  Rng alice;
  Rng bob;
};

std::size_t delayed_count(const ScenarioParams& p) {
  return p.delayed_blocks.value_or(p.k);
}

std::vector<bc::AliceStrategy> binding_strategies(const ScenarioParams& p,
                                                  Bit reveal) {
  std::vector<bc::AliceStrategy> per_block;
  const std::size_t k_star = delayed_count(p);
  for (std::size_t i = 0; i < p.k; ++i) {
    if (i < k_star) {
      per_block.push_back(bc::AliceStrategy::delay_all(reveal));
    } else if (i < k_star + p.zero_blocks) {
      per_block.push_back(bc::AliceStrategy::flip_after_input(0, reveal));
    } else {
      per_block.push_back(bc::AliceStrategy::flip_after_input(1, reveal));
    }
  }
  return per_block;
}

BitString guess_y(const ScenarioParams& p) {
  switch (p.guess_y) {
    case GuessY::Best:
      return bc::best_guess_y(p.n);
    case GuessY::Zero:
      return BitString(2 * p.n + 1, 0);
    case GuessY::Uniform:
      return {};
  }
  return {};
}

Bit binding_reveal(const ScenarioParams& p, std::uint64_t index) {
  return p.reveal.value_or(static_cast<Bit>(index & 1U));
}

TrialRecord run_trial(const Scenario& s, std::uint64_t index) {
  const ScenarioParams& p = s.params;
  TrialRecord rec;
  rec.trial = index;
  rec.seed = trial_seed(s.seed, index);

  switch (s.kind) {
    case ScenarioKind::BCHonest: {
      const bc::BCParams params{p.n, p.k};
      TrialContext ctx(rec.seed, params.total_boxes());
      const Bit c = ctx.alice.bit();
      const auto r =
          bc::run_protocol(params, bc::AliceStrategy::honest(c),
                           bc::BobStrategy::honest(), ctx.session, ctx.alice,
                           ctx.bob);
      rec.event = r.verdict == bc::Verdict::Accept && r.revealed_bit == c;
      rec.outcome = bc::to_string(r.verdict);
      rec.fields["c"] = c;
      break;
    }
    case ScenarioKind::BCBinding: {
      const bc::BCParams params{p.n, p.k};
      TrialContext ctx(rec.seed, params.total_boxes());
      const Bit reveal = binding_reveal(p, index);
      const auto strategies = binding_strategies(p, reveal);
      const auto r = bc::run_protocol(params, strategies,
                                      bc::BobStrategy::honest(), ctx.session,
                                      ctx.alice, ctx.bob);
      rec.event = r.verdict == bc::Verdict::Accept;
      rec.outcome = bc::to_string(r.verdict);
      rec.fields["reveal"] = reveal;
      std::int64_t rejected_blocks = 0;
      for (const auto& b : r.blocks) {
        if (b.verdict == bc::Verdict::Reject) ++rejected_blocks;
      }
      rec.fields["rejected_blocks"] = rejected_blocks;
      break;
    }
    case ScenarioKind::BCGuess: {
      const bc::BCParams params{p.n, p.k};
      TrialContext ctx(rec.seed, params.total_boxes());
      const Bit c = ctx.alice.bit();
      const std::vector<bc::AliceStrategy> per_block(
          p.k, bc::AliceStrategy::honest(c));
      const auto blocks = bc::commit_phase(
          params, per_block, bc::BobStrategy::inner_product_guess(guess_y(p)),
          ctx.session, ctx.alice, ctx.bob);
      std::vector<bc::BobBlockView> views;
      for (const auto& b : blocks) views.push_back(b.bob_view());
      const Bit guess = bc::bob_guess(views);
      rec.event = guess == c;
      rec.outcome = rec.event ? "correct" : "wrong";
      rec.fields["c"] = c;
      rec.fields["guess"] = guess;
      break;
    }
    case ScenarioKind::OTHonest:
    case ScenarioKind::OTBobAttack: {
      const ot::OTParams params{p.n, p.backend, bc::BCParams{p.bc_n, p.bc_k}};
      TrialContext ctx(rec.seed, params.boxes_required());
      const Bit s0 = ctx.alice.bit();
      const Bit s1 = ctx.alice.bit();
      const Bit c = ctx.bob.bit();
      const auto bob =
          s.kind == ScenarioKind::OTHonest
              ? ot::BobBehavior::honest()
              : ot::BobBehavior::attacking(ot::BobOTAttack::first(p.cheat_rounds));
      const auto session =
          ot::run_ot(params, s0, s1, c, bob, ctx.session, ctx.alice, ctx.bob);
      const bool got = session.outcome.kind == ot::OutcomeKind::BobGets;
      const Bit want = c == 0 ? s0 : s1;
      const Bit other = c == 0 ? s1 : s0;
      rec.outcome = ot::to_string(session.outcome.kind);
      rec.fields["matches"] = static_cast<std::int64_t>(session.matches);
      rec.fields["wrong_output"] = got && session.outcome.value != want;
      if (s.kind == ScenarioKind::OTHonest) {
        rec.event = !got;
      } else {
        rec.event = session.bob_learned_both;
        rec.fields["escaped"] = session.passed_cut_and_choose;
        rec.fields["wrong_other"] =
            session.bob_learned_both && session.bob_other_secret != other;
        std::int64_t delayed_survivors = 0;
        for (const auto& r : session.rounds) delayed_survivors += r.delayed;
        std::int64_t fabricated_opened = 0;
        std::int64_t fabricated_passed = 0;
        for (const auto& ch : session.challenges) {
          if (ch.opened_delayed) {
            ++fabricated_opened;
            fabricated_passed += ch.passed;
          }
        }
        rec.fields["delayed_survivors"] = delayed_survivors;
        rec.fields["fabricated_opened"] = fabricated_opened;
        rec.fields["fabricated_passed"] = fabricated_passed;
      }
      break;
    }
    case ScenarioKind::ErasureDemo:
    case ScenarioKind::WWDemo: {
      TrialContext ctx(rec.seed, 1);
      const Bit v = ctx.alice.bit();
      const auto got =
          s.kind == ScenarioKind::ErasureDemo
              ? ot::single_box_erasure(v, p.receiver, ctx.session, ctx.alice,
                                       ctx.bob)
              : ot::ww_reduction_demo(v, p.receiver, ctx.session, ctx.alice,
                                      ctx.bob);
      rec.event = got.has_value();
      rec.outcome = got ? "received" : "erased";
      rec.fields["wrong_value"] = got && *got != v;
      break;
    }
    case ScenarioKind::NoSignalingCheck:
      throw std::logic_error("no-signaling audit has no per-trial runner");
  }
  return rec;
}

std::int64_t field_sum(const std::vector<TrialRecord>& records,
                       const std::string& name) {
  std::int64_t total = 0;
  for (const auto& r : records) {
    auto it = r.fields.find(name);
    if (it != r.fields.end()) total += it->second;
  }
  return total;
}

nlohmann::json rate(std::uint64_t hits, std::uint64_t trials) {
  const Interval ci = wilson95(hits, trials);
  return {{"count", hits},
          {"trials", trials},
          {"estimate", double(hits) / double(trials)},
          {"ci95", {ci.lo, ci.hi}}};
}

TrialSummary aggregate(const Scenario& s,
                       const std::vector<TrialRecord>& records) {
  const ScenarioParams& p = s.params;
  std::uint64_t hits = 0;
  for (const auto& r : records) hits += r.event;
  const std::string name = to_string(s.kind);
  TrialSummary summary;

  switch (s.kind) {
    case ScenarioKind::BCHonest:
      summary = summarize(name, "accepted", hits, s.trials,
                          Bound{"1", 1.0, BoundSense::AtLeast});
      break;
    case ScenarioKind::BCBinding: {
      const std::size_t k_star = delayed_count(p);
      const std::size_t k0 = p.zero_blocks;
      const std::size_t k1 = p.k - k_star - k0;
      std::uint64_t trials_by_reveal[2] = {0, 0};
      std::uint64_t accepts_by_reveal[2] = {0, 0};
      for (const auto& r : records) {
        const auto c = static_cast<std::size_t>(r.fields.at("reveal"));
        ++trials_by_reveal[c];
        accepts_by_reveal[c] += r.event;
      }
      const double per_reveal_bound[2] = {
          std::pow(0.75, double(k_star)) * std::pow(0.5, double(k1)),
          std::pow(0.75, double(k_star)) * std::pow(0.5, double(k0))};
      std::optional<Bound> bound;
      if (k_star == p.k) {
        bound = Bound{"(3/4)^k", bc_delay_bound(p.k), BoundSense::AtMost};
      } else if (p.reveal) {
        bound = Bound{*p.reveal == 0 ? "(3/4)^k* (1/2)^k1" : "(3/4)^k* (1/2)^k0",
                      per_reveal_bound[*p.reveal], BoundSense::AtMost};
      } else {
        bound = Bound{"((3/4)^k* ((1/2)^k1 + (1/2)^k0)) / 2",
                      bc_mixed_binding_sum(k_star, k0, k1) / 2.0,
                      BoundSense::AtMost};
      }
      summary = summarize(name, "alice_accepted", hits, s.trials, bound);
      summary.details["k_star"] = k_star;
      summary.details["k0"] = k0;
      summary.details["k1"] = k1;
      double binding_sum = 0.0;
      for (int c = 0; c < 2; ++c) {
        const std::string key = "reveal" + std::to_string(c);
        if (trials_by_reveal[c] == 0) continue;
        summary.details[key] = rate(accepts_by_reveal[c], trials_by_reveal[c]);
        summary.details[key]["bound"] = per_reveal_bound[c];
        binding_sum +=
            double(accepts_by_reveal[c]) / double(trials_by_reveal[c]);
      }
      if (trials_by_reveal[0] > 0 && trials_by_reveal[1] > 0) {
        summary.details["binding_sum"] = binding_sum;
        summary.details["binding_sum_bound"] =
            bc_mixed_binding_sum(k_star, k0, k1);
        if (k_star <= 2 && k0 == 0 && p.k >= 2) {
          summary.details["binding_sum_headline_bound"] =
              bc_binding_sum_bound(p.k);
        }
      }
      break;
    }
    case ScenarioKind::BCGuess: {
      summary = summarize(name, "guess_correct", hits, s.trials,
                          Bound{"1/2 + k/2^(n+1)", bc_guess_bound(p.n, p.k),
                                BoundSense::AtMost});
      const BitString y = guess_y(p);
      if (!y.empty()) {
        double per_block = 0.5;
        if (std::any_of(y.begin(), y.end(), [](Bit b) { return b != 0; })) {
          const double pcy = exact_pcy(p.n, y, 0);
          per_block = std::max(pcy, 1.0 - pcy);
        }
        summary.details["y"] = nlbox::to_string(y);
        summary.details["exact_block_accuracy"] = per_block;
        summary.details["exact_accuracy"] =
            majority_guess_accuracy(per_block, p.k);
      }
      break;
    }
    case ScenarioKind::OTHonest: {
      summary = summarize(name, "bob_fails", hits, s.trials,
                          Bound{"e^(-n/18)", ot_honest_failure_bound(p.n),
                                BoundSense::AtMost});
      std::uint64_t aborts = 0;
      for (const auto& r : records) aborts += r.outcome == "AliceAborts";
      summary.details["alice_aborts"] = aborts;
      summary.details["wrong_outputs"] = field_sum(records, "wrong_output");
      const std::size_t threshold = 2 * p.n / 3;
      summary.details["exact_failure"] = binomial_tail(p.n, threshold);
      summary.details["exact_failure_rational"] =
          binomial_tail_rational(p.n, threshold);
      break;
    }
    case ScenarioKind::OTBobAttack: {
      const std::size_t k = p.cheat_rounds;
      summary = summarize(
          name, "bob_learns_both", hits, s.trials,
          Bound{k < p.n && 3 * k < p.n
                    ? "(3/4)^k e^(-2 (n-3k)^2 / (18 (n-k)))"
                    : "(3/4)^k",
                ot_attack_bound(p.n, k), BoundSense::AtMost});
      const auto escaped = static_cast<std::uint64_t>(field_sum(records, "escaped"));
      summary.details["escape"] = rate(escaped, s.trials);
      summary.details["escape"]["bound"] = std::pow(0.75, double(k));
      const auto opened =
          static_cast<std::uint64_t>(field_sum(records, "fabricated_opened"));
      const auto passed =
          static_cast<std::uint64_t>(field_sum(records, "fabricated_passed"));
      if (opened > 0) summary.details["fabricated_challenge"] = rate(passed, opened);
      summary.details["delayed_survivors"] =
          field_sum(records, "delayed_survivors");
      summary.details["wrong_outputs"] = field_sum(records, "wrong_output") +
                                         field_sum(records, "wrong_other");
      if (k == 0) {
        // at least 2n/3 matches among n fair coins
        summary.details["exact_both_rate"] =
            1.0 - binomial_tail(p.n, p.n / 3);
      }
      break;
    }
    case ScenarioKind::ErasureDemo:
    case ScenarioKind::WWDemo: {
      const bool delaying = p.receiver == ot::Receiver::Delaying;
      summary = summarize(name,
                          s.kind == ScenarioKind::ErasureDemo ? "received"
                                                              : "learned",
                          hits, s.trials,
                          Bound{delaying ? "1" : "1/2", delaying ? 1.0 : 0.5,
                                BoundSense::Equals});
      summary.details["wrong_values"] = field_sum(records, "wrong_value");
      break;
    }
    case ScenarioKind::NoSignalingCheck:
      break;
  }
  return summary;
}

}  // namespace

std::string to_string(ScenarioKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kKindNames) {
    if (name == n) return kind;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

void Scenario::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  const ScenarioParams& p = params;
  switch (kind) {
    case ScenarioKind::BCHonest:
    case ScenarioKind::BCGuess:
      bc::BCParams{p.n, p.k}.validate();
      if (kind == ScenarioKind::BCGuess && p.n > kEnumerationCap) {
        throw std::invalid_argument("bc guess: n exceeds enumeration cap");
      }
      break;
    case ScenarioKind::BCBinding:
      bc::BCParams{p.n, p.k}.validate();
      if (delayed_count(p) + p.zero_blocks > p.k) {
        throw std::invalid_argument(
            "bc binding: delayed + zero-committed blocks exceed k");
      }
      if (p.reveal && *p.reveal > 1) {
        throw std::invalid_argument("bc binding: reveal must be 0 or 1");
      }
      break;
    case ScenarioKind::OTHonest:
    case ScenarioKind::OTBobAttack:
      ot::OTParams{p.n, p.backend, bc::BCParams{p.bc_n, p.bc_k}}.validate();
      if (p.cheat_rounds > p.n) {
        throw std::invalid_argument("ot attack: cheat rounds exceed n");
      }
      break;
    case ScenarioKind::ErasureDemo:
    case ScenarioKind::WWDemo:
    case ScenarioKind::NoSignalingCheck:
      break;
  }
}

nlohmann::json params_to_json(const Scenario& s) {
  const ScenarioParams& p = s.params;
  nlohmann::json j;
  switch (s.kind) {
    case ScenarioKind::BCHonest:
      j = {{"n", p.n}, {"k", p.k}};
      break;
    case ScenarioKind::BCBinding:
      j = {{"n", p.n},
           {"k", p.k},
           {"delayed_blocks", delayed_count(p)},
           {"zero_blocks", p.zero_blocks}};
      j["reveal"] = p.reveal ? nlohmann::json(*p.reveal) : nlohmann::json("alternate");
      break;
    case ScenarioKind::BCGuess:
      j = {{"n", p.n}, {"k", p.k}, {"y", guess_y_name(p.guess_y)}};
      break;
    case ScenarioKind::OTHonest:
    case ScenarioKind::OTBobAttack:
      j = {{"n", p.n},
           {"backend", p.backend == ot::Backend::Ideal ? "ideal" : "nlbc"}};
      if (p.backend == ot::Backend::Nlbc) {
        j["bc_n"] = p.bc_n;
        j["bc_k"] = p.bc_k;
      }
      if (s.kind == ScenarioKind::OTBobAttack) j["cheat_rounds"] = p.cheat_rounds;
      break;
    case ScenarioKind::ErasureDemo:
    case ScenarioKind::WWDemo:
      j = {{"receiver",
            p.receiver == ot::Receiver::Delaying ? "delaying" : "synchronous"}};
      break;
    case ScenarioKind::NoSignalingCheck:
      j = nlohmann::json::object();
      break;
  }
  return j;
}

nlohmann::json to_json(const TrialRecord& r) {
  nlohmann::json j = {{"trial", r.trial},
                      {"seed", r.seed},
                      {"event", r.event},
                      {"outcome", r.outcome}};
  for (const auto& [k, v] : r.fields) j[k] = v;
  return j;
}

ScenarioResult run_scenario(const Scenario& s) {
  s.validate();
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;

  if (s.kind == ScenarioKind::NoSignalingCheck) {
    const NoSignalingReport report = no_signaling_audit(s.trials, s.seed);
    std::uint64_t ones = 0;
    std::uint64_t trials = 0;
    for (const auto& cell : report.cells) {
      if (!cell.remote_input) continue;
      ones += cell.ones;
      trials += cell.trials;
      TrialRecord rec;
      rec.trial = result.records.size();
      rec.seed = s.seed;
      rec.event = cell.pass;
      rec.outcome = cell.pass ? "uniform" : "biased";
      rec.fields = {{"party", static_cast<std::int64_t>(cell.party)},
                    {"local_input", cell.local_input},
                    {"remote_input", *cell.remote_input},
                    {"ones", static_cast<std::int64_t>(cell.ones)},
                    {"trials", static_cast<std::int64_t>(cell.trials)}};
      result.records.push_back(std::move(rec));
    }
    result.summary = summarize(to_string(s.kind), "output_one", ones, trials,
                               Bound{"1/2", 0.5, BoundSense::Equals});
    result.summary.details = to_json(report);
    result.summary.verdict =
        report.pass ? BoundVerdict::WithinBound : BoundVerdict::Violates;
  } else {
    std::vector<TrialRecord> records(s.trials);
    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(s.workers, s.trials));
    if (workers <= 1) {
      for (std::uint64_t i = 0; i < s.trials; ++i) records[i] = run_trial(s, i);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(workers);
      const std::uint64_t chunk = (s.trials + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min(s.trials, lo + chunk);
            for (std::uint64_t i = lo; i < hi; ++i) records[i] = run_trial(s, i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    result.summary = aggregate(s, records);
    result.records = std::move(records);
  }

  result.summary.seed = s.seed;
  result.summary.params = params_to_json(s);
  if (s.timing) {
    result.summary.runtime_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
  }
  return result;
}

double bc_delay_bound(std::size_t k) { return std::pow(0.75, double(k)); }

double bc_binding_sum_bound(std::size_t k) {
  return 1.0 + std::pow(0.5, double(k) - 2.0);
}

double bc_mixed_binding_sum(std::size_t k_star, std::size_t k0,
                            std::size_t k1) {
  return std::pow(0.75, double(k_star)) *
         (std::pow(0.5, double(k1)) + std::pow(0.5, double(k0)));
}

double bc_guess_bound(std::size_t n, std::size_t k) {
  return 0.5 + double(k) / std::pow(2.0, double(n + 1));
}

double ot_honest_failure_bound(std::size_t n) {
  return std::exp(-double(n) / 18.0);
}

double ot_attack_bound(std::size_t n, std::size_t k) {
  const double escape = std::pow(0.75, double(k));
  // The Hoeffding step needs n - 3k > 0; otherwise only escaping counts.
  if (k >= n || 3 * k >= n) return escape;
  const double gap = double(n) - 3.0 * double(k);
  return escape * std::exp(-2.0 * gap * gap / (18.0 * (double(n) - double(k))));
}

double majority_guess_accuracy(double p, std::size_t k) {
  // P[more correct votes than wrong] + P[tie] / 2
  double total = 0.0;
  double binom = 1.0;
  for (std::size_t j = 0; j <= k; ++j) {
    const double mass =
        binom * std::pow(p, double(j)) * std::pow(1.0 - p, double(k - j));
    if (2 * j > k) total += mass;
    if (2 * j == k) total += 0.5 * mass;
    binom = binom * double(k - j) / double(j + 1);
  }
  return total;
}

NoSignalingReport no_signaling_audit(std::uint64_t trials_per_cell,
                                     std::uint64_t seed, double tolerance) {
  if (trials_per_cell == 0) {
    throw std::invalid_argument("no_signaling_audit: trials must be positive");
  }
  NoSignalingReport report;
  report.tolerance = tolerance;
  report.structural_ok = true;

  std::uint64_t cell_index = 0;
  for (Party local : {Party::Alice, Party::Bob}) {
    for (Bit x = 0; x <= 1; ++x) {
      for (int remote = 0; remote <= 2; ++remote) {
        CellStat cell;
        cell.party = local;
        cell.local_input = x;
        if (remote < 2) cell.remote_input = static_cast<Bit>(remote);
        cell.trials = trials_per_cell;
        BoxSession session(derive_seed(seed, cell_index++), trials_per_cell);
        for (std::uint64_t t = 0; t < trials_per_cell; ++t) {
          Bit out = 0;
          const bool local_first = !cell.remote_input || t % 2 == 0;
          if (local_first) {
            out = session.enter_input(t, local, x);
            if (cell.remote_input) {
              const Bit remote_out =
                  session.enter_input(t, other(local), *cell.remote_input);
              ++report.correlation_checks;
              if ((out ^ remote_out) != (x & *cell.remote_input)) {
                ++report.correlation_failures;
              }
            }
          } else {
            const Bit remote_out =
                session.enter_input(t, other(local), *cell.remote_input);
            out = session.enter_input(t, local, x);
            ++report.correlation_checks;
            if ((out ^ remote_out) != (x & *cell.remote_input)) {
              ++report.correlation_failures;
            }
          }
          cell.ones += out;
        }
        cell.frequency = double(cell.ones) / double(cell.trials);
        cell.pass = std::abs(cell.frequency - 0.5) <= tolerance;
        report.cells.push_back(cell);
      }
    }
  }

  // A first mover's output must not depend on anything the remote side
  // does afterwards: replay the same boxes with each remote behaviour.
  const std::uint64_t probe = std::min<std::uint64_t>(trials_per_cell, 4096);
  for (Party local : {Party::Alice, Party::Bob}) {
    for (Bit x = 0; x <= 1; ++x) {
      std::vector<Bit> reference;
      for (int remote = 0; remote <= 2; ++remote) {
        BoxSession session(derive_seed(seed, 0xABCDEFULL), probe);
        std::vector<Bit> outs;
        for (std::uint64_t t = 0; t < probe; ++t) {
          outs.push_back(session.enter_input(t, local, x));
          if (session.is_used(t, other(local)) ||
              !session.box(t).output(local).has_value()) {
            report.structural_ok = false;
          }
          if (remote < 2) {
            session.enter_input(t, other(local), static_cast<Bit>(remote));
          }
          if (*session.box(t).output(local) != outs.back()) {
            report.structural_ok = false;
          }
        }
        if (reference.empty()) {
          reference = outs;
        } else if (outs != reference) {
          report.structural_ok = false;
        }
      }
    }
  }

  report.pass = report.structural_ok && report.correlation_failures == 0 &&
                std::all_of(report.cells.begin(), report.cells.end(),
                            [](const CellStat& c) { return c.pass; });
  return report;
}

ChshReport chsh_audit(std::uint64_t boxes, std::uint64_t seed) {
  if (boxes == 0) throw std::invalid_argument("chsh_audit: no boxes");
  ChshReport report;
  BoxSession session(seed, boxes);
  for (std::uint64_t i = 0; i < boxes; ++i) {
    const auto cell = static_cast<std::size_t>(i % 4);
    const Bit x = static_cast<Bit>(cell >> 1);
    const Bit y = static_cast<Bit>(cell & 1U);
    Bit a = 0;
    Bit b = 0;
    // alternate who moves first
    if ((i / 4) % 2 == 0) {
      a = session.enter_input(i, Party::Alice, x);
      b = session.enter_input(i, Party::Bob, y);
    } else {
      b = session.enter_input(i, Party::Bob, y);
      a = session.enter_input(i, Party::Alice, x);
    }
    ++report.trials[cell];
    if ((a ^ b) == (x & y)) ++report.satisfied[cell];
  }
  for (std::size_t c = 0; c < 4; ++c) {
    if (report.trials[c] > 0) {
      report.value += double(report.satisfied[c]) / double(report.trials[c]);
    }
  }
  return report;
}

nlohmann::json to_json(const NoSignalingReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back(
        {{"party", std::string(to_string(c.party))},
         {"local_input", c.local_input},
         {"remote_input", c.remote_input ? nlohmann::json(*c.remote_input)
                                         : nlohmann::json("never")},
         {"trials", c.trials},
         {"ones", c.ones},
         {"frequency", c.frequency},
         {"pass", c.pass}});
  }
  return {{"tolerance", r.tolerance},
          {"cells", std::move(cells)},
          {"structural_ok", r.structural_ok},
          {"correlation_checks", r.correlation_checks},
          {"correlation_failures", r.correlation_failures},
          {"pass", r.pass}};
}

nlohmann::json to_json(const ChshReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t c = 0; c < 4; ++c) {
    cells.push_back({{"x", c >> 1},
                     {"y", c & 1U},
                     {"trials", r.trials[c]},
                     {"satisfied", r.satisfied[c]}});
  }
  return {{"cells", std::move(cells)}, {"chsh_value", r.value}};
}

}  // namespace nlbox::sim
