#include "app.hpp"

#include <cstring>
#include <exception>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "ogb/stream.hpp"

namespace ogb::cli {

namespace {

const char* const kCommands[][2] = {
    {"run", "progressive validation of a booster on a data set or synthetic stream"},
    {"batch-compare", "ungated versus gated batch boosting on a planted least-squares problem"},
    {"lower-bound", "regret of the hull booster on the adversarial Bernoulli construction"},
    {"grid", "tune learning rate, stages and step on the first half of a stream"},
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += "\n  - " + x;
  return s;
}

// --config must be read before flag parsing so that flags override the file.
std::optional<std::string> find_config_path(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return std::string(argv[i] + 9);
  }
  return std::nullopt;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot read config file " + path});
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError({"config file " + path + " is not valid JSON: " + e.what()});
  }
  // A run summary carries its configuration under "config".
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  RunConfig c;
  if (auto problems = merge_json(j, c); !problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration:" + join(problems)), problems_(std::move(problems)) {}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  std::string config_path;
  try {
    if (auto path = find_config_path(argc, argv)) c = load_config(*path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  CLI::App app{"Online gradient boosting experiments", "ogb"};
  app.require_subcommand(1);
  for (const auto& [name, description] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON config or run summary; flags given override it");
    add_options(*sub, name, c);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();

  if (auto problems = c.validate(); !problems.empty()) {
    err << ConfigError(std::move(problems)).what() << '\n';
    return kConfigError;
  }
  try {
    if (c.command == "run") return run_command(c, out);
    if (c.command == "batch-compare") return batch_compare_command(c, out);
    if (c.command == "lower-bound") return lower_bound_command(c, out);
    return grid_command(c, out);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error reading " << c.data << ": " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace ogb::cli
