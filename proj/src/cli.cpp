#include "nlbox/cli.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "nlbox/oracle.hpp"

namespace nlbox::cli {

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::size_t> n;
  std::optional<std::size_t> k;
  std::optional<std::size_t> delayed_blocks;
  std::optional<std::size_t> zero_blocks;
  std::optional<int> reveal;
  std::optional<std::string> y;
  std::optional<std::size_t> cheat_rounds;
  std::optional<std::string> backend;
  std::optional<std::size_t> bc_n;
  std::optional<std::size_t> bc_k;
  std::optional<std::size_t> threshold;
  std::optional<unsigned> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> config;
  bool delay = false;
  bool timing = false;
};

template <typename T>
void overlay(T& field, const std::optional<T>& value) {
  if (value) field = *value;
}

template <typename T>
void overlay(std::optional<T>& field, const std::optional<T>& value) {
  if (value) field = value;
}

void check_choice(const std::string& what, const std::string& value,
                  std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw std::invalid_argument("invalid " + what + " '" + value + "'");
}

void validate(const CliConfig& c) {
  check_choice("format", c.format, {"json", "jsonl", "table"});
  check_choice("backend", c.backend, {"ideal", "nlbc"});
  check_choice("y", c.y, {"best", "zero", "uniform"});
  if (c.reveal && *c.reveal > 1) {
    throw std::invalid_argument("--reveal must be 0 or 1");
  }
  if (c.trials == 0) throw std::invalid_argument("--trials must be >= 1");
  if (c.workers == 0) throw std::invalid_argument("--workers must be >= 1");
}

std::string num(const nlohmann::json& v) { return v.dump(); }

void print_table(std::ostream& out, const nlohmann::json& doc) {
  for (const auto& [key, value] : doc.items()) {
    if (key == "config") continue;
    if (value.is_object() || (value.is_array() && !value.empty() &&
                              value.front().is_structured())) {
      // nested sections, one line per leaf
      const nlohmann::json flat = value.flatten();
      for (const auto& leaf : flat.items()) {
        out << key << leaf.key() << "  " << num(leaf.value()) << "\n";
      }
    } else {
      out << key << "  " << num(value) << "\n";
    }
  }
}

int exit_code(const nlohmann::json& doc) {
  if (doc.contains("verdict") && doc["verdict"] == "Violates") return 1;
  return 0;
}

void emit(std::ostream& out, const CliConfig& c, nlohmann::json doc,
          const std::vector<sim::TrialRecord>& records) {
  doc["config"] = to_json(c);
  if (!c.out.empty()) {
    std::ofstream file(c.out);
    if (!file) throw std::runtime_error("cannot open " + c.out);
    for (const auto& r : records) file << sim::to_json(r).dump() << "\n";
  }
  if (c.format == "table") {
    print_table(out, doc);
  } else if (c.format == "jsonl") {
    for (const auto& r : records) out << sim::to_json(r).dump() << "\n";
    out << doc.dump() << "\n";
  } else {
    out << doc.dump(2) << "\n";
  }
}

nlohmann::json bias_report(std::size_t n, std::uint64_t seed) {
  const auto table = sim::exact_bias_table(n, 256, seed);
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : table.entries) {
    entries.push_back({{"y", nlbox::to_string(e.y)},
                       {"c", e.c},
                       {"favorable", e.p.favorable},
                       {"total", e.p.total},
                       {"p", e.p.value()}});
  }
  const bool within = table.max_abs_deviation() <= table.bound();
  nlohmann::json doc = {{"oracle", "lemma1"},
                        {"n", n},
                        {"full_sweep", table.full_sweep},
                        {"bound", table.bound()},
                        {"max_abs_deviation", table.max_abs_deviation()},
                        {"entries", std::move(entries)},
                        {"verdict", within ? "WithinBound" : "Violates"}};
  if (const auto* w = table.tightness_witness()) {
    doc["witness"] = {{"y", nlbox::to_string(w->y)}, {"c", w->c}, {"p", w->p.value()}};
  } else {
    doc["witness"] = nullptr;
  }
  return doc;
}

}  // namespace

CliConfig defaults_for(const std::string& command,
                       const std::string& subcommand) {
  CliConfig c;
  c.command = command;
  c.subcommand = subcommand;
  if (command == "bc") {
    c.n = subcommand == "guess" ? 3 : 2;
    c.k = subcommand == "guess" ? 4 : 10;
    c.trials = subcommand == "honest" ? 10000 : 100000;
  } else if (command == "ot") {
    c.n = 36;
    c.cheat_rounds = 6;
    c.trials = 10000;
  } else if (command == "demo") {
    c.trials = 1000;
  } else if (command == "oracle") {
    c.n = subcommand == "binomial" ? 36 : 3;
  } else if (command == "audit") {
    c.trials = 100000;
  }
  return c;
}

nlohmann::json to_json(const CliConfig& c) {
  nlohmann::json j = {{"command", c.command},
                      {"subcommand", c.subcommand},
                      {"trials", c.trials},
                      {"n", c.n},
                      {"k", c.k},
                      {"zero_blocks", c.zero_blocks},
                      {"y", c.y},
                      {"cheat_rounds", c.cheat_rounds},
                      {"backend", c.backend},
                      {"bc_n", c.bc_n},
                      {"bc_k", c.bc_k},
                      {"delay", c.delay},
                      {"workers", c.workers},
                      {"out", c.out},
                      {"format", c.format},
                      {"timing", c.timing}};
  j["seed"] = c.seed ? nlohmann::json(*c.seed) : nlohmann::json(nullptr);
  j["delayed_blocks"] = c.delayed_blocks ? nlohmann::json(*c.delayed_blocks)
                                         : nlohmann::json(nullptr);
  j["reveal"] = c.reveal ? nlohmann::json(*c.reveal) : nlohmann::json(nullptr);
  j["threshold"] =
      c.threshold ? nlohmann::json(*c.threshold) : nlohmann::json(nullptr);
  return j;
}

CliConfig merge_json(CliConfig base, const nlohmann::json& input) {
  const nlohmann::json& j =
      input.contains("config") && input["config"].is_object() ? input["config"]
                                                              : input;
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key) && !j[key].is_null()) {
      j[key].get_to(field);
    }
  };
  auto get_opt = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      if (j[key].is_null()) {
        field.reset();
      } else {
        field = j[key].template get<typename std::decay_t<decltype(field)>::value_type>();
      }
    }
  };
  try {
    get("trials", base.trials);
    get("n", base.n);
    get("k", base.k);
    get("zero_blocks", base.zero_blocks);
    get("y", base.y);
    get("cheat_rounds", base.cheat_rounds);
    get("backend", base.backend);
    get("bc_n", base.bc_n);
    get("bc_k", base.bc_k);
    get("delay", base.delay);
    get("workers", base.workers);
    get("out", base.out);
    get("format", base.format);
    get("timing", base.timing);
    get_opt("seed", base.seed);
    get_opt("delayed_blocks", base.delayed_blocks);
    get_opt("reveal", base.reveal);
    get_opt("threshold", base.threshold);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  return base;
}

sim::Scenario to_scenario(const CliConfig& c) {
  sim::Scenario s;
  const std::string key = c.command + " " + c.subcommand;
  if (key == "bc honest") {
    s.kind = sim::ScenarioKind::BCHonest;
  } else if (key == "bc binding") {
    s.kind = sim::ScenarioKind::BCBinding;
  } else if (key == "bc guess") {
    s.kind = sim::ScenarioKind::BCGuess;
  } else if (key == "ot honest") {
    s.kind = sim::ScenarioKind::OTHonest;
  } else if (key == "ot attack") {
    s.kind = sim::ScenarioKind::OTBobAttack;
  } else if (key == "demo erasure") {
    s.kind = sim::ScenarioKind::ErasureDemo;
  } else if (key == "demo ww-reduction") {
    s.kind = sim::ScenarioKind::WWDemo;
  } else if (key == "audit no-signaling") {
    s.kind = sim::ScenarioKind::NoSignalingCheck;
  } else {
    throw std::invalid_argument("'" + key + "' is not a simulation");
  }
  s.trials = c.trials;
  s.seed = c.seed.value_or(0);
  s.workers = c.workers;
  s.timing = c.timing;
  auto& p = s.params;
  p.n = c.n;
  p.k = c.k;
  p.delayed_blocks = c.delayed_blocks;
  p.zero_blocks = c.zero_blocks;
  p.reveal = c.reveal;
  p.guess_y = c.y == "zero"      ? sim::GuessY::Zero
              : c.y == "uniform" ? sim::GuessY::Uniform
                                 : sim::GuessY::Best;
  p.cheat_rounds = c.cheat_rounds;
  p.backend = c.backend == "nlbc" ? ot::Backend::Nlbc : ot::Backend::Ideal;
  p.bc_n = c.bc_n;
  p.bc_k = c.bc_k;
  p.receiver = c.delay ? ot::Receiver::Delaying : ot::Receiver::Synchronous;
  s.validate();
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Non-local box cryptography simulator", "nlbox"};
  app.require_subcommand(1);
  Overrides o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--n", o.n, "Security / round parameter n");
    sub->add_option("--k,--blocks", o.k, "Number of commitment blocks");
    sub->add_option("--delayed-blocks", o.delayed_blocks,
                    "Blocks where Alice delays all inputs (default: all)");
    sub->add_option("--zero-blocks", o.zero_blocks,
                    "Input-flipping blocks committed to 0");
    sub->add_option("--reveal", o.reveal,
                    "Bit a cheating Alice reveals (default: alternate)");
    sub->add_option("--y", o.y, "Guessing verifier's y: best|zero|uniform");
    sub->add_option("--cheat-rounds", o.cheat_rounds,
                    "Rounds on which Bob delays his box (|C|)");
    sub->add_option("--backend", o.backend, "Commitment backend: ideal|nlbc");
    sub->add_option("--bc-n", o.bc_n, "Per-block n of the nlbc backend");
    sub->add_option("--bc-k", o.bc_k, "Blocks of the nlbc backend");
    sub->add_flag("--delay", o.delay, "Receiver delays his box input");
    sub->add_option("--threshold", o.threshold, "Binomial tail threshold");
    sub->add_option("--trials", o.trials, "Number of trials");
    sub->add_option("--seed", o.seed, "Master seed (default: random)");
    sub->add_option("--workers", o.workers, "Maximum worker threads");
    sub->add_option("--out", o.out, "Write per-trial JSON Lines here");
    sub->add_option("--format", o.format, "Output format: json|jsonl|table");
    sub->add_option("--config", o.config, "JSON config; flags take priority");
    sub->add_flag("--timing", o.timing, "Include runtime_ms in the summary");
  };

  const std::vector<std::pair<std::string, std::vector<std::string>>> tree = {
      {"bc", {"honest", "binding", "guess"}},
      {"ot", {"honest", "attack"}},
      {"demo", {"erasure", "ww-reduction"}},
      {"oracle", {"lemma1", "binomial"}},
      {"audit", {"no-signaling"}},
  };
  std::vector<std::pair<CLI::App*, std::pair<std::string, std::string>>> leaves;
  for (const auto& [group, subs] : tree) {
    CLI::App* g = app.add_subcommand(group, group + " scenarios");
    g->require_subcommand(1);
    for (const auto& sub : subs) {
      CLI::App* leaf = g->add_subcommand(sub, group + " " + sub);
      add_common(leaf);
      leaves.push_back({leaf, {group, sub}});
    }
  }

  std::vector<const char*> argv;
  argv.push_back("nlbox");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 2;
  }

  std::string command;
  std::string subcommand;
  for (const auto& [leaf, names] : leaves) {
    if (leaf->parsed()) std::tie(command, subcommand) = names;
  }

  CliConfig c;
  try {
    c = defaults_for(command, subcommand);
    if (o.config) {
      std::ifstream file(*o.config);
      if (!file) throw std::invalid_argument("cannot read config " + *o.config);
      nlohmann::json j;
      try {
        file >> j;
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config is not JSON: ") + e.what());
      }
      c = merge_json(c, j);
      c.command = command;
      c.subcommand = subcommand;
    }
    overlay(c.seed, o.seed);
    overlay(c.trials, o.trials);
    overlay(c.n, o.n);
    overlay(c.k, o.k);
    overlay(c.delayed_blocks, o.delayed_blocks);
    overlay(c.zero_blocks, o.zero_blocks);
    if (o.reveal) {
      if (*o.reveal != 0 && *o.reveal != 1) {
        throw std::invalid_argument("--reveal must be 0 or 1");
      }
      c.reveal = static_cast<Bit>(*o.reveal);
    }
    overlay(c.y, o.y);
    overlay(c.cheat_rounds, o.cheat_rounds);
    overlay(c.backend, o.backend);
    overlay(c.bc_n, o.bc_n);
    overlay(c.bc_k, o.bc_k);
    overlay(c.threshold, o.threshold);
    overlay(c.workers, o.workers);
    overlay(c.out, o.out);
    overlay(c.format, o.format);
    if (o.delay) c.delay = true;
    if (o.timing) c.timing = true;
    validate(c);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (command == "oracle") {
    try {
      nlohmann::json doc;
      if (subcommand == "lemma1") {
        if (!c.seed) c.seed = 0;
        doc = bias_report(c.n, *c.seed);
      } else {
        const std::size_t threshold = c.threshold.value_or(2 * c.n / 3);
        if (threshold > c.n) {
          throw std::invalid_argument("--threshold must not exceed --n");
        }
        c.threshold = threshold;
        doc = {{"oracle", "binomial"},
               {"n", c.n},
               {"threshold", threshold},
               {"probability", sim::binomial_tail(c.n, threshold)},
               {"rational", sim::binomial_tail_rational(c.n, threshold)}};
      }
      const int code = exit_code(doc);
      emit(out, c, std::move(doc), {});
      return code;
    } catch (const ResourceLimit& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return 2;
    }
  }

  if (!c.seed) {
    c.seed = std::random_device{}();
    err << "seed: " << *c.seed << "\n";
  }
  sim::Scenario scenario;
  try {
    scenario = to_scenario(c);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const sim::ScenarioResult result = sim::run_scenario(scenario);
  nlohmann::json doc = sim::to_json(result.summary);
  if (scenario.kind == sim::ScenarioKind::NoSignalingCheck) {
    doc["details"]["chsh"] =
        sim::to_json(sim::chsh_audit(4 * scenario.trials, scenario.seed));
  }
  if (result.summary.runtime_ms) {
    err << "runtime_ms: " << *result.summary.runtime_ms << "\n";
  }
  const int code = exit_code(doc);
  emit(out, c, std::move(doc), result.records);
  return code;
}

}  // namespace nlbox::cli
