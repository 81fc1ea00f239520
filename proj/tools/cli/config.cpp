#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ogb/losses.hpp"
#include "ogb/stream.hpp"

template <typename T>
struct nlohmann::adl_serializer<std::optional<T>> {
  static void to_json(json& j, const std::optional<T>& v) {
    if (v) j = *v;
    else j = nullptr;
  }
  static void from_json(const json& j, std::optional<T>& v) {
    if (j.is_null()) v.reset();
    else v = j.get<T>();
  }
};

namespace ogb::cli {

namespace {

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool runs_a_booster(const std::string& command) { return command == "run" || command == "grid"; }

void check_eta(const std::string& eta, std::size_t stages, std::vector<std::string>& errors) {
  if (eta == "auto" || stages == 0) return;
  const auto v = parse_number(eta);
  if (!v) {
    errors.push_back("--eta must be a number or auto, got '" + eta + "'");
    return;
  }
  const double lo = 1.0 / static_cast<double>(stages);
  if (!(*v >= lo && *v <= 1.0)) {
    errors.push_back("--eta " + eta + " lies outside [1/N, 1] = [" + num(lo) + ", 1] for N = " +
                     std::to_string(stages));
  }
}

}  // namespace

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errors;
  auto need = [&](bool ok, std::string what) {
    if (!ok) errors.push_back(std::move(what));
  };
  static const std::set<std::string> commands = {"run", "batch-compare", "lower-bound", "grid"};
  need(commands.count(command) > 0, "unknown command '" + command + "'");
  need(stages >= 1, "--stages must be at least 1");

  if (command == "batch-compare") {
    if (eta != "auto") {
      const auto v = parse_number(eta);
      need(v && *v >= 0.0 && *v <= 1.0, "--eta for batch-compare must lie in [0, 1], got '" + eta + "'");
    }
    need(functions >= 1, "--functions must be at least 1");
    need(points >= 1, "--points must be at least 1");
    need(l1 > 0.0, "--l1 must be positive");
    return errors;
  }

  if (command == "lower-bound") {
    need(scale_c > 0.0 && scale_c <= 1.0, "--scale-c must lie in (0, 1]");
    if (scale_c > 0.0 && stages >= 1) {
      need(static_cast<double>(stages) / scale_c <= 1e6,
           "--stages / --scale-c gives a pool above 10^6 functions");
    }
    need(seeds >= 1, "--seeds must be at least 1");
    return errors;
  }

  if (!runs_a_booster(command)) return errors;

  need(algo == "span" || algo == "ch", "--algo must be span or ch, got '" + algo + "'");
  const bool span = algo == "span";
  if (command == "grid" && !grid_stages.empty()) {
    for (std::size_t n : grid_stages) need(n >= 1, "--grid-stages entries must be at least 1");
  }
  const std::vector<std::size_t> stage_list =
      command == "grid" && !grid_stages.empty() ? grid_stages : std::vector<std::size_t>{stages};
  const std::vector<std::string> eta_list =
      command == "grid" && !grid_eta.empty() ? grid_eta : std::vector<std::string>{eta};
  for (const auto& e : eta_list) {
    if (!span && e != "auto") {
      errors.push_back("--eta applies to --algo span only");
      break;
    }
    for (std::size_t n : stage_list) check_eta(e, n, errors);
  }

  try {
    LossClass::parse(loss);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--loss: ") + e.what());
  }
  need(bound > 0.0, "--bound must be positive");
  need(scale >= 1.0, "--scale must be at least 1");
  need(scale == 1.0 || span, "--scale needs --algo span");
  need(!corollary_mode || span, "--corollary-mode needs --algo span");

  static const std::set<std::string> bases = {"ogd", "stump", "hedge-pool", "greedy"};
  need(bases.count(base) > 0, "--base must be one of ogd, stump, hedge-pool, greedy; got '" + base + "'");
  need(base != "greedy" || greedy_offsets, "--base greedy needs --greedy-offsets");
  need(!greedy_offsets || base == "greedy", "--greedy-offsets needs --base greedy");
  need(!(symmetrize && base == "greedy"), "--symmetrize cannot wrap --base greedy");
  const bool has_rate = base == "ogd" || base == "stump";
  if (learning_rate) {
    need(*learning_rate > 0.0, "--learning-rate must be positive");
    need(has_rate, "--learning-rate applies to --base ogd or stump only");
  }

  need(data.empty() != synthetic.empty(), "exactly one of --data and --synthetic is required");
  need(synthetic.empty() || synthetic == "planted" || synthetic == "additive",
       "--synthetic must be planted or additive, got '" + synthetic + "'");
  try {
    parse_format(format);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--format: ") + e.what());
  }
  try {
    parse_label_range(label_range);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--label-range: ") + e.what());
  }
  need(split >= 0.0 && split <= 1.0, "--split must lie in [0, 1]");
  if (!synthetic.empty()) {
    need(rounds >= 1, "--rounds must be at least 1");
    need(pool_size >= 1 && pool_size <= 64, "--pool-size must lie in [1, 64]");
    need(l1 > 0.0, "--l1 must be positive");
    need(noise >= 0.0, "--noise must be non-negative");
  }

  if (command == "grid") {
    need(!assert_bounds, "--assert-bounds is not available for grid");
    need(grid_learning_rates.empty() || has_rate, "--grid-lr applies to --base ogd or stump only");
    for (double r : grid_learning_rates) need(r > 0.0, "--grid-lr entries must be positive");
  } else if (assert_bounds) {
    need(synthetic == "planted", "--assert-bounds needs --synthetic planted");
    need(base == "hedge-pool", "--assert-bounds needs --base hedge-pool");
    need(!symmetrize, "--assert-bounds cannot be combined with --symmetrize");
    need(scale == 1.0, "--assert-bounds cannot be combined with --scale");
  }
  return errors;
}

double RunConfig::resolved_step() const {
  if (eta == "auto") return default_step(stages);
  return *parse_number(eta);
}

std::string RunConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env = std::getenv("OGB_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

#define OGB_FIELDS(X)                                                                         \
  X(command) X(algo) X(stages) X(eta) X(loss) X(bound) X(scale) X(greedy_offsets)            \
  X(corollary_mode) X(base) X(symmetrize) X(learning_rate) X(data) X(format) X(label_range)  \
  X(synthetic) X(rounds) X(pool_size) X(l1) X(noise) X(seed) X(split) X(functions) X(points) \
  X(scale_c) X(seeds) X(grid_learning_rates) X(grid_stages) X(grid_eta) X(workers)           \
  X(output_dir) X(name) X(assert_bounds)

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json::object();
#define OGB_PUT(f) j[#f] = c.f;
  OGB_FIELDS(OGB_PUT)
#undef OGB_PUT
}

std::vector<std::string> merge_json(const nlohmann::json& j, RunConfig& c) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"config must be a JSON object"};
  std::set<std::string> known;
#define OGB_GET(f)                                                               \
  known.insert(#f);                                                              \
  if (auto it = j.find(#f); it != j.end()) {                                     \
    try {                                                                        \
      it->get_to(c.f);                                                           \
    } catch (const nlohmann::json::exception&) {                                 \
      errors.push_back("config key '" #f "' has the wrong type");                \
    }                                                                            \
  }
  OGB_FIELDS(OGB_GET)
#undef OGB_GET
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) errors.push_back("unknown config key '" + key + "'");
  }
  return errors;
}

#undef OGB_FIELDS

void add_options(CLI::App& app, const std::string& command, RunConfig& c) {
  app.add_option("--stages,-N", c.stages, "number of boosting stages N")->capture_default_str();
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--output-dir,-o", c.output_dir,
                 "directory for the TSV and JSON artifacts (default $OGB_OUTPUT_DIR, else .)");
  app.add_option("--name", c.name, "artifact file stem (default: the command name)");

  if (command == "batch-compare") {
    app.add_option("--eta", c.eta, "constant step in [0, 1], or auto for ln(N)/N")->capture_default_str();
    app.add_option("--functions", c.functions, "base functions in the dictionary")->capture_default_str();
    app.add_option("--points", c.points, "batch size m")->capture_default_str();
    app.add_option("--l1", c.l1, "l1 norm of the planted comparator")->capture_default_str();
    app.add_flag("--assert-bounds", c.assert_bounds, "exit 4 if a stage exceeds its bound");
    return;
  }
  if (command == "lower-bound") {
    app.add_option("--scale-c", c.scale_c, "pool constant c, M = N / c")->capture_default_str();
    app.add_option("--seeds", c.seeds, "number of seeds, starting at --seed")->capture_default_str();
    app.add_flag("--assert-bounds", c.assert_bounds, "exit 4 if some regret is below c T / N");
    return;
  }

  app.add_option("--algo", c.algo, "booster: span or ch")->capture_default_str();
  app.add_option("--eta", c.eta, "span step in [1/N, 1], or auto for ln(N)/N")->capture_default_str();
  app.add_option("--loss", c.loss, "linear | p-norm:<p> | mls | logistic | squared")->capture_default_str();
  app.add_option("--bound,-D", c.bound, "base learner output bound D")->capture_default_str();
  app.add_option("--scale", c.scale, "span booster over lambda-scaled learners")->capture_default_str();
  app.add_flag("--greedy-offsets", c.greedy_offsets, "hand each stage its incoming partial sum");
  app.add_flag("--corollary-mode", c.corollary_mode, "use radius B = eta N D");
  app.add_option("--base", c.base, "ogd | stump | hedge-pool | greedy")->capture_default_str();
  app.add_flag("--symmetrize", c.symmetrize, "compete with F, -F and 0");
  app.add_option("--learning-rate", c.learning_rate, "base rate c in c / sqrt(t) for ogd and stump");
  app.add_option("--data", c.data, "input stream");
  app.add_option("--format", c.format, "libsvm or csv")->capture_default_str();
  app.add_option("--label-range", c.label_range, "none | symmetric | unit")->capture_default_str();
  app.add_option("--synthetic", c.synthetic, "planted or additive");
  app.add_option("--rounds,-T", c.rounds, "synthetic stream length")->capture_default_str();
  app.add_option("--pool-size", c.pool_size, "planted pool size")->capture_default_str();
  app.add_option("--l1", c.l1, "l1 norm of the planted span comparator")->capture_default_str();
  app.add_option("--noise", c.noise, "label noise standard deviation")->capture_default_str();
  app.add_option("--split", c.split, "fraction of rounds in the tuning half")->capture_default_str();
  if (command == "grid") {
    app.add_option("--grid-lr", c.grid_learning_rates, "learning rates to try")->delimiter(',');
    app.add_option("--grid-stages", c.grid_stages, "stage counts to try")->delimiter(',');
    app.add_option("--grid-eta", c.grid_eta, "steps to try (numbers or auto)")->delimiter(',');
    app.add_option("--workers", c.workers, "parallel runs (0: one per core)")->capture_default_str();
  } else {
    app.add_flag("--assert-bounds", c.assert_bounds, "exit 4 if the regret bound is violated");
  }
}

}  // namespace ogb::cli
