#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace CLI {
class App;
}

namespace ogb::cli {

/// Everything a subcommand needs. Each command-line flag sets exactly one field,
/// and the whole struct is echoed into the JSON summary.
struct RunConfig {
  std::string command = "run";  // run | batch-compare | lower-bound | grid

  // booster
  std::string algo = "span";  // span | ch
  std::size_t stages = 10;
  std::string eta = "auto";  // a number, or auto for ln(N)/N
  std::string loss = "squared";
  double bound = 1.0;  // D
  double scale = 1.0;  // lambda
  bool greedy_offsets = false;
  bool corollary_mode = false;

  // base learner
  std::string base = "ogd";  // ogd | stump | hedge-pool | greedy
  bool symmetrize = false;
  std::optional<double> learning_rate;

  // data
  std::string data;
  std::string format = "libsvm";
  std::string label_range = "none";
  std::string synthetic;  // planted | additive
  std::size_t rounds = 10000;
  std::size_t pool_size = 8;
  double l1 = 2.0;
  double noise = 0.01;
  std::uint64_t seed = 1;
  double split = 0.5;

  // batch-compare
  std::size_t functions = 8;
  std::size_t points = 100;

  // lower-bound
  double scale_c = 1.0 / 50.0;
  std::size_t seeds = 1;

  // grid
  std::vector<double> grid_learning_rates;
  std::vector<std::size_t> grid_stages;
  std::vector<std::string> grid_eta;
  std::size_t workers = 0;

  // output
  std::string output_dir;  // empty: $OGB_OUTPUT_DIR, then the working directory
  std::string name;        // file stem; empty: the command name
  bool assert_bounds = false;

  /// Every violated constraint, in a fixed order; empty when the config is valid.
  std::vector<std::string> validate() const;

  /// The step for the configured stage count (resolving auto).
  double resolved_step() const;
  std::string resolved_output_dir() const;
  std::string stem() const { return name.empty() ? command : name; }
};

void to_json(nlohmann::json& j, const RunConfig& c);
/// Reads the fields present in `j` over the current values. Unknown keys are
/// errors, reported together with any type errors.
std::vector<std::string> merge_json(const nlohmann::json& j, RunConfig& c);

/// Registers the flags relevant to `command` on a CLI11 (sub)command, bound to `c`.
void add_options(CLI::App& app, const std::string& command, RunConfig& c);

}  // namespace ogb::cli
