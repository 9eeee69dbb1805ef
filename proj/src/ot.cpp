#include "nlbox/ot.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <utility>

namespace nlbox::ot {

void OTParams::validate() const {
  if (n < 3 || n % 3 != 0) {
    throw std::invalid_argument("OTParams: n must be a positive multiple of 3");
  }
  if (backend == Backend::Nlbc) bc.validate();
}

std::size_t OTParams::boxes_required() const noexcept {
  std::size_t boxes = 2 * n;
  // four commitments per pair
  if (backend == Backend::Nlbc) boxes += 4 * n * bc.total_boxes();
  return boxes;
}

CommitmentBackend::Handle IdealCommitments::commit(Bit value) {
  values_.emplace_back(value);
  return values_.size() - 1;
}

std::optional<Bit> IdealCommitments::open(Handle handle) {
  if (handle >= values_.size() || !values_[handle]) {
    throw ProtocolViolation("unknown or already opened commitment");
  }
  return std::exchange(values_[handle], std::nullopt);
}

NlbcCommitments::NlbcCommitments(bc::BCParams params, BoxSession& session,
                                 Rng& committer_rng, Rng& verifier_rng)
    : params_(params),
      session_(session),
      committer_rng_(committer_rng),
      verifier_rng_(verifier_rng) {
  params_.validate();
}

CommitmentBackend::Handle NlbcCommitments::commit(Bit value) {
  pending_.emplace_back(bc::Commitment::commit(params_, value, session_,
                                               committer_rng_, verifier_rng_));
  return pending_.size() - 1;
}

std::optional<Bit> NlbcCommitments::open(Handle handle) {
  if (handle >= pending_.size() || !pending_[handle]) {
    throw ProtocolViolation("unknown or already opened commitment");
  }
  bc::Commitment c = std::move(*pending_[handle]);
  pending_[handle].reset();
  const bc::ProtocolResult r = c.open(session_, committer_rng_);
  if (r.verdict != bc::Verdict::Accept) return std::nullopt;
  return r.revealed_bit;
}

BobOTAttack BobOTAttack::first(std::size_t k) {
  BobOTAttack a;
  a.cheat_set.resize(k);
  std::iota(a.cheat_set.begin(), a.cheat_set.end(), std::size_t{0});
  return a;
}

void BobOTAttack::validate(std::size_t n) const {
  std::vector<std::size_t> sorted = cheat_set;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("BobOTAttack: duplicate cheat index");
  }
  if (!sorted.empty() && sorted.back() >= n) {
    throw std::invalid_argument("BobOTAttack: cheat index out of range");
  }
}

bool valid_index_sets(std::size_t n, std::span<const std::size_t> J0,
                      std::span<const std::size_t> J1) {
  if (J0.size() != n / 3 || J1.size() != n / 3) return false;
  std::vector<bool> seen(n, false);
  for (auto set : {J0, J1}) {
    for (std::size_t i : set) {
      if (i >= n || seen[i]) return false;
      seen[i] = true;
    }
  }
  return true;
}

namespace {

Bit xor_over(std::span<const std::size_t> idx,
             const std::function<Bit(std::size_t)>& value) {
  Bit acc = 0;
  for (std::size_t i : idx) acc ^= value(i);
  return acc;
}

std::vector<std::size_t> complement(std::size_t n,
                                    std::span<const std::size_t> taken) {
  std::vector<bool> used(n, false);
  for (std::size_t i : taken) used[i] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  return rest;
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

OTSession run_ot(const OTParams& params, Bit s0, Bit s1, Bit c,
                 const BobBehavior& bob, BoxSession& session, Rng& alice_rng,
                 Rng& bob_rng) {
  params.validate();
  const std::size_t n = params.n;
  if (bob.attack) bob.attack->validate(n);
  if (session.unallocated() < params.boxes_required()) {
    throw std::invalid_argument("run_ot: not enough unused boxes");
  }

  OTSession s;
  s.params = params;
  s.s0 = s0;
  s.s1 = s1;
  s.c = c;
  const BoxId base = session.allocate(2 * n);

  std::unique_ptr<CommitmentBackend> commitments;
  if (params.backend == Backend::Nlbc) {
    commitments = std::make_unique<NlbcCommitments>(params.bc, session,
                                                    bob_rng, alice_rng);
  } else {
    commitments = std::make_unique<IdealCommitments>();
  }

  // Bob decides which member of each cheated pair he leaves unused.
  s.box_rounds.resize(2 * n);
  if (bob.attack) {
    s.cheat_set = sorted(bob.attack->cheat_set);
    for (std::size_t i : s.cheat_set) {
      const bool honest_in_second = bob_rng.bit() == 1;
      s.box_rounds[honest_in_second ? i : i + n].delayed = true;
    }
  }

  // Step 1: 2n box rounds.
  for (std::size_t i = 0; i < 2 * n; ++i) {
    BoxRound& r = s.box_rounds[i];
    r.r0 = alice_rng.bit();
    r.r1 = alice_rng.bit();
    r.x = r.r0 ^ r.r1;
    r.a = session.enter_input(base + i, Party::Alice, r.x);
    if (!r.delayed) {
      r.y_prime = bob_rng.bit();
      r.b = session.enter_input(base + i, Party::Bob, *r.y_prime);
      r.bob_used_in_step1 = true;
    }
  }

  // Step 2: cut-and-choose on every pair (i, i+n).
  s.rounds.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t idx : {i, i + n}) {
      BoxRound& r = s.box_rounds[idx];
      if (r.delayed) {
        r.committed_y_prime = 1;
        r.committed_b = bob_rng.bit();
      } else {
        r.committed_y_prime = *r.y_prime;
        r.committed_b = *r.b;
      }
    }
    // commit(y'_i), commit(b_i), commit(y'_{i+n}), commit(b_{i+n})
    for (std::size_t idx : {i, i + n}) {
      BoxRound& r = s.box_rounds[idx];
      r.y_handle = commitments->commit(r.committed_y_prime);
      r.b_handle = commitments->commit(r.committed_b);
    }

    Challenge ch;
    ch.pair = i;
    ch.k = alice_rng.bit();
    ch.opened = i + ch.k * n;
    BoxRound& opened = s.box_rounds[ch.opened];
    ch.opened_delayed = opened.delayed;
    ch.opened_y_prime = commitments->open(opened.y_handle);
    ch.opened_b = commitments->open(opened.b_handle);
    ch.passed = ch.opened_y_prime && ch.opened_b &&
                (opened.x & *ch.opened_y_prime) == (opened.a ^ *ch.opened_b);
    s.challenges.push_back(ch);
    if (!ch.passed) {
      s.outcome = {OutcomeKind::AliceAborts, 0};
      return s;
    }

    const std::size_t keep = i + (1 - ch.k) * n;
    const BoxRound& kept = s.box_rounds[keep];
    OTRoundState& st = s.rounds[i];
    st.source = keep;
    st.r0 = kept.r0;
    st.r1 = kept.r1;
    st.x = kept.x;
    st.a = kept.a;
    st.k_challenge = ch.k;
    st.delayed = kept.delayed;
    if (!kept.delayed) {
      st.y_prime = *kept.y_prime;
      st.b = *kept.b;
    }
  }
  s.passed_cut_and_choose = true;

  // Step 3: masks, Bob's unmasking, Alice's random choice.
  for (std::size_t i = 0; i < n; ++i) {
    OTRoundState& st = s.rounds[i];
    st.m = st.r0 ^ st.a;
    if (!st.delayed) st.v_prime = st.m ^ st.b;
    st.y = alice_rng.bit();
    st.v = st.y ? st.r1 : st.r0;
    if (st.delayed) {
      // Bob only now uses the box, with y' = y
      BoxRound& r = s.box_rounds[st.source];
      st.y_prime = st.y;
      st.b = session.enter_input(base + st.source, Party::Bob, st.y_prime);
      r.y_prime = st.y_prime;
      r.b = st.b;
      st.v_prime = st.m ^ st.b;
    }
  }

  // Step 4: Bob's sets.
  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < n; ++i) {
    if (s.rounds[i].y == s.rounds[i].y_prime) matching.push_back(i);
  }
  s.matches = matching.size();
  const std::size_t m = params.set_size();
  std::vector<std::size_t> Jc;
  std::vector<std::size_t> Jother;
  bool bob_ok = false;
  if (bob.attack && matching.size() >= 2 * m) {
    Jc = bob_rng.sample(matching, m);
    std::vector<std::size_t> left;
    for (std::size_t i : matching) {
      if (std::find(Jc.begin(), Jc.end(), i) == Jc.end()) left.push_back(i);
    }
    Jother = bob_rng.sample(left, m);
    bob_ok = true;
    s.bob_learned_both = true;
  } else if (matching.size() >= m) {
    Jc = bob_rng.sample(matching, m);
    Jother = bob_rng.sample(complement(n, Jc), m);
    bob_ok = true;
  } else {
    // Announce a well-formed pair anyway; the failure stays local.
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    Jc = bob_rng.sample(all, m);
    Jother = bob_rng.sample(complement(n, Jc), m);
  }
  Jc = sorted(std::move(Jc));
  Jother = sorted(std::move(Jother));
  s.J0 = c == 0 ? Jc : Jother;
  s.J1 = c == 0 ? Jother : Jc;

  // Step 5: Alice checks and masks the secrets.
  if (!valid_index_sets(n, s.J0, s.J1)) {
    s.outcome = {OutcomeKind::AliceAborts, 0};
    s.bob_learned_both = false;
    return s;
  }
  auto v_of = [&](std::size_t i) { return s.rounds[i].v; };
  auto v_prime_of = [&](std::size_t i) { return s.rounds[i].v_prime; };
  s.s_hat0 = static_cast<Bit>(s0 ^ xor_over(s.J0, v_of));
  s.s_hat1 = static_cast<Bit>(s1 ^ xor_over(s.J1, v_of));

  // Step 6: Bob unmasks.
  const Bit s_hat_c = c == 0 ? *s.s_hat0 : *s.s_hat1;
  const Bit s_hat_other = c == 0 ? *s.s_hat1 : *s.s_hat0;
  if (bob_ok) {
    s.outcome = {OutcomeKind::BobGets,
                 static_cast<Bit>(s_hat_c ^ xor_over(Jc, v_prime_of))};
  } else {
    s.outcome = {OutcomeKind::BobFails, 0};
  }
  if (s.bob_learned_both) {
    s.bob_other_secret =
        static_cast<Bit>(s_hat_other ^ xor_over(Jother, v_prime_of));
  }
  return s;
}

sim::TrialSummary bob_learns_both(std::span<const OTSession> sessions) {
  if (sessions.empty()) {
    throw std::invalid_argument("bob_learns_both: no sessions");
  }
  std::uint64_t both = 0;
  std::uint64_t escaped = 0;
  for (const auto& s : sessions) {
    if (s.passed_cut_and_choose) ++escaped;
    // Learning both means the outcome and the other secret are both right.
    if (s.passed_cut_and_choose && s.bob_learned_both &&
        s.outcome.kind == OutcomeKind::BobGets &&
        s.bob_other_secret.has_value() &&
        s.outcome.value == (s.c ? s.s1 : s.s0) &&
        *s.bob_other_secret == (s.c ? s.s0 : s.s1)) {
      ++both;
    }
  }
  auto summary = sim::summarize("ot-bob-learns-both", "bob_learns_both", both,
                                sessions.size(), std::nullopt);
  summary.details["escaped"] = escaped;
  return summary;
}

std::optional<Bit> single_box_erasure(Bit v, Receiver receiver,
                                      BoxSession& session, Rng& alice_rng,
                                      Rng& bob_rng) {
  const BoxId box = session.allocate(1);
  const Bit y = alice_rng.bit();
  Bit r[2];
  r[y] = v;
  r[y ^ 1U] = alice_rng.bit();
  const Bit a = session.enter_input(box, Party::Alice, r[0] ^ r[1]);
  const Bit m = r[0] ^ a;

  if (receiver == Receiver::Synchronous) {
    const Bit y_prime = bob_rng.bit();
    const Bit b = session.enter_input(box, Party::Bob, y_prime);
    const Bit got = m ^ b;
    // Alice announces y
    if (y_prime != y) return std::nullopt;
    return got;
  }
  // Delaying receiver waits for y before touching the box.
  const Bit b = session.enter_input(box, Party::Bob, y);
  return static_cast<Bit>(m ^ b);
}

std::optional<Bit> ww_reduction_demo(Bit b, Receiver receiver,
                                     BoxSession& session, Rng& sender_rng,
                                     Rng& receiver_rng) {
  const BoxId box = session.allocate(1);
  const Bit k = sender_rng.bit();
  Bit secrets[2];
  secrets[k] = b;
  secrets[k ^ 1U] = 0;
  const Bit a = session.enter_input(box, Party::Alice, secrets[0] ^ secrets[1]);
  const Bit m = secrets[0] ^ a;

  if (receiver == Receiver::Synchronous) {
    const Bit choice = receiver_rng.bit();
    const Bit out = session.enter_input(box, Party::Bob, choice);
    const Bit s_choice = m ^ out;
    // sender announces k
    if (choice != k) return std::nullopt;
    return s_choice;
  }
  // selection deferred until k is public
  const Bit out = session.enter_input(box, Party::Bob, k);
  return static_cast<Bit>(m ^ out);
}

AliceView alice_view(const OTSession& s) {
  AliceView v;
  for (const auto& r : s.rounds) v.y.push_back(r.y);
  for (const auto& ch : s.challenges) {
    if (ch.opened_y_prime) v.opened_y_prime.push_back(*ch.opened_y_prime);
    if (ch.opened_b) v.opened_b.push_back(*ch.opened_b);
  }
  v.J0 = s.J0;
  v.J1 = s.J1;
  for (const auto& r : s.box_rounds) {
    if (r.bob_used_in_step1) ++v.bob_boxes_used_in_step1;
  }
  v.matches = s.matches;
  return v;
}

namespace {

using Extractor = std::function<double(const AliceView&)>;

double fraction_of_ones(const std::vector<Bit>& bits) {
  if (bits.empty()) return 0.0;
  return static_cast<double>(std::count(bits.begin(), bits.end(), Bit{1})) /
         static_cast<double>(bits.size());
}

double count_with_y1(const AliceView& v, const std::vector<std::size_t>& J) {
  double count = 0;
  for (std::size_t i : J) {
    if (i < v.y.size() && v.y[i] == 1) count += 1;
  }
  return count;
}

double index_sum(const std::vector<std::size_t>& J) {
  return static_cast<double>(std::accumulate(J.begin(), J.end(), std::size_t{0}));
}

bool contains(const std::vector<std::size_t>& J, std::size_t i) {
  return std::find(J.begin(), J.end(), i) != J.end();
}

std::vector<std::pair<std::string, Extractor>> view_statistics() {
  return {
      {"match_count", [](const AliceView& v) { return double(v.matches); }},
      {"opened_y_prime_ones",
       [](const AliceView& v) { return fraction_of_ones(v.opened_y_prime); }},
      {"opened_b_ones",
       [](const AliceView& v) { return fraction_of_ones(v.opened_b); }},
      {"j0_rounds_with_y1",
       [](const AliceView& v) { return count_with_y1(v, v.J0); }},
      {"j1_rounds_with_y1",
       [](const AliceView& v) { return count_with_y1(v, v.J1); }},
      {"j0_index_sum", [](const AliceView& v) { return index_sum(v.J0); }},
      {"j1_index_sum", [](const AliceView& v) { return index_sum(v.J1); }},
      {"j0_min_below_j1_min",
       [](const AliceView& v) {
         if (v.J0.empty() || v.J1.empty()) return 0.0;
         return v.J0.front() < v.J1.front() ? 1.0 : 0.0;
       }},
      {"round0_in_j0",
       [](const AliceView& v) { return contains(v.J0, 0) ? 1.0 : 0.0; }},
      {"round0_in_j1",
       [](const AliceView& v) { return contains(v.J1, 0) ? 1.0 : 0.0; }},
      {"bob_boxes_used_in_step1",
       [](const AliceView& v) { return double(v.bob_boxes_used_in_step1); }},
  };
}

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(std::span<const OTSession> runs, const Extractor& f) {
  Moments m;
  if (runs.empty()) return m;
  // two-pass for stability
  std::vector<double> xs;
  xs.reserve(runs.size());
  for (const auto& s : runs) xs.push_back(f(alice_view(s)));
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  for (double x : xs) m.var += (x - m.mean) * (x - m.mean);
  if (xs.size() > 1) m.var /= static_cast<double>(xs.size() - 1);
  return m;
}

}  // namespace

ViewIndependenceReport alice_view_independence(
    std::span<const OTSession> c0_runs, std::span<const OTSession> c1_runs,
    double z_threshold) {
  if (c0_runs.empty() || c1_runs.empty()) {
    throw std::invalid_argument("alice_view_independence: empty arm");
  }
  ViewIndependenceReport report;
  report.trials0 = c0_runs.size();
  report.trials1 = c1_runs.size();
  report.z_threshold = z_threshold;
  for (const auto& [name, f] : view_statistics()) {
    const Moments m0 = moments(c0_runs, f);
    const Moments m1 = moments(c1_runs, f);
    StatisticComparison cmp;
    cmp.name = name;
    cmp.mean0 = m0.mean;
    cmp.mean1 = m1.mean;
    cmp.std_error = std::sqrt(m0.var / double(c0_runs.size()) +
                              m1.var / double(c1_runs.size()));
    const double diff = m0.mean - m1.mean;
    if (cmp.std_error > 0.0) {
      cmp.z = diff / cmp.std_error;
      cmp.pass = std::abs(cmp.z) <= z_threshold;
    } else {
      cmp.z = 0.0;
      cmp.pass = diff == 0.0;
    }
    report.pass = report.pass && cmp.pass;
    report.statistics.push_back(std::move(cmp));
  }
  return report;
}

std::string to_string(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::BobGets:
      return "BobGets";
    case OutcomeKind::AliceAborts:
      return "AliceAborts";
    case OutcomeKind::BobFails:
      return "BobFails";
  }
  return "unknown";
}

namespace {

template <typename T>
nlohmann::json opt(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const OTSession& s) {
  using nlohmann::json;
  json j;
  j["params"] = {{"n", s.params.n},
                 {"backend", s.params.backend == Backend::Ideal ? "ideal" : "nlbc"}};
  if (s.params.backend == Backend::Nlbc) {
    j["params"]["bc"] = {{"n", s.params.bc.n}, {"k", s.params.bc.k}};
  }
  j["s0"] = s.s0;
  j["s1"] = s.s1;
  j["c"] = s.c;
  j["cheat_set"] = s.cheat_set;
  json box_rounds = json::array();
  for (const auto& r : s.box_rounds) {
    box_rounds.push_back({{"r0", r.r0},
                          {"r1", r.r1},
                          {"x", r.x},
                          {"a", r.a},
                          {"y_prime", opt(r.y_prime)},
                          {"b", opt(r.b)},
                          {"delayed", r.delayed},
                          {"committed_y_prime", r.committed_y_prime},
                          {"committed_b", r.committed_b}});
  }
  j["box_rounds"] = std::move(box_rounds);
  json challenges = json::array();
  for (const auto& ch : s.challenges) {
    challenges.push_back({{"pair", ch.pair},
                          {"k", ch.k},
                          {"opened", ch.opened},
                          {"opened_y_prime", opt(ch.opened_y_prime)},
                          {"opened_b", opt(ch.opened_b)},
                          {"passed", ch.passed}});
  }
  j["challenges"] = std::move(challenges);
  json rounds = json::array();
  for (const auto& r : s.rounds) {
    rounds.push_back({{"source", r.source},
                      {"r0", r.r0},
                      {"r1", r.r1},
                      {"x", r.x},
                      {"y_prime", r.y_prime},
                      {"a", r.a},
                      {"b", r.b},
                      {"k", r.k_challenge},
                      {"m", r.m},
                      {"v", r.v},
                      {"v_prime", r.v_prime},
                      {"y", r.y},
                      {"delayed", r.delayed}});
  }
  j["rounds"] = std::move(rounds);
  j["J0"] = s.J0;
  j["J1"] = s.J1;
  j["s_hat0"] = opt(s.s_hat0);
  j["s_hat1"] = opt(s.s_hat1);
  j["outcome"] = {{"kind", to_string(s.outcome.kind)}};
  if (s.outcome.kind == OutcomeKind::BobGets) {
    j["outcome"]["value"] = s.outcome.value;
  }
  j["matches"] = s.matches;
  j["passed_cut_and_choose"] = s.passed_cut_and_choose;
  j["bob_learned_both"] = s.bob_learned_both;
  return j;
}

nlohmann::json to_json(const ViewIndependenceReport& r) {
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : r.statistics) {
    stats.push_back({{"name", s.name},
                     {"mean_c0", s.mean0},
                     {"mean_c1", s.mean1},
                     {"std_error", s.std_error},
                     {"z", s.z},
                     {"pass", s.pass}});
  }
  return {{"trials_c0", r.trials0},
          {"trials_c1", r.trials1},
          {"z_threshold", r.z_threshold},
          {"statistics", std::move(stats)},
          {"pass", r.pass}};
}

}  // namespace nlbox::ot
