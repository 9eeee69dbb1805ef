#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlbox/common.hpp"
#include "nlbox/harness.hpp"

namespace nlbox::cli {

/// Fully resolved command-line configuration. Every summary embeds it, and
/// feeding it back through --config reproduces the run.
struct CliConfig {
  std::string command;     // bc | ot | demo | oracle | audit
  std::string subcommand;  // honest | binding | guess | attack | ...
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 10000;
  std::size_t n = 2;
  std::size_t k = 10;
  std::optional<std::size_t> delayed_blocks;
  std::size_t zero_blocks = 0;
  std::optional<Bit> reveal;
  std::string y = "best";
  std::size_t cheat_rounds = 6;
  std::string backend = "ideal";
  std::size_t bc_n = 1;
  std::size_t bc_k = 2;
  bool delay = false;
  std::optional<std::size_t> threshold;
  unsigned workers = 1;
  std::string out;
  std::string format = "json";
  bool timing = false;
};

/// Defaults for one subcommand.
CliConfig defaults_for(const std::string& command,
                       const std::string& subcommand);

nlohmann::json to_json(const CliConfig& c);
/// Overlays the keys present in `j` onto `base`. Accepts either a bare
/// config object or a summary document carrying one under "config".
CliConfig merge_json(CliConfig base, const nlohmann::json& j);

/// Maps a simulation subcommand onto a harness scenario. Throws
/// std::invalid_argument for oracle subcommands or bad parameters.
sim::Scenario to_scenario(const CliConfig& c);

/// Entry point. Exit codes: 0 clean / within bound, 1 a bound was
/// violated, 2 usage or parameter error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace nlbox::cli
