#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "app.hpp"
#include "ogb/batch.hpp"
#include "ogb/boosting.hpp"
#include "ogb/function_pool.hpp"
#include "ogb/greedy.hpp"
#include "ogb/harness.hpp"
#include "ogb/hedge_learner.hpp"
#include "ogb/ogd_learner.hpp"
#include "ogb/oracle.hpp"
#include "ogb/scaled_learner.hpp"
#include "ogb/stump_learner.hpp"
#include "ogb/symmetrized_learner.hpp"
#include "ogb/synthetic.hpp"

namespace ogb::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kInputDim = 5;
constexpr std::size_t kAdditiveComponents = 5;
constexpr std::size_t kAdditiveBins = 8;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Opens <dir>/<stem><ext> for writing, creating the directory.
std::ofstream artifact(const RunConfig& c, const std::string& ext, std::string& path) {
  const std::filesystem::path dir = c.resolved_output_dir();
  std::filesystem::create_directories(dir);
  path = (dir / (c.stem() + ext)).string();
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

void write_json(const RunConfig& c, const json& summary, std::ostream& out) {
  std::string path;
  std::ofstream f = artifact(c, ".json", path);
  f << summary.dump(2) << '\n';
  out << "summary: " << path << '\n';
}

json bound_json(const BoundReport& r) {
  return {{"name", r.name}, {"measured", r.measured}, {"bound", r.bound}, {"ratio", r.ratio},
          {"pass", r.pass}};
}

// ---------------------------------------------------------------------------
// data and learners

struct Setup {
  Stream stream;
  std::shared_ptr<const FunctionPool> planted_pool;  // the planted functions, unsymmetrized
  std::shared_ptr<const FunctionPool> pool;          // what hedge-pool and greedy learn over
  ComparatorSpec comparator = ComparatorSpec::zero();
};

std::shared_ptr<const FunctionPool> feature_pool(const Stream& s, double bound) {
  std::set<FeatureId> ids;
  for (const Example& x : s) {
    for (const Feature& f : x.features()) ids.insert(f.id);
  }
  if (ids.empty()) throw std::runtime_error("stream has no features to build a pool from");
  return std::make_shared<FeaturePool>(std::vector<FeatureId>(ids.begin(), ids.end()), bound);
}

Setup load(const RunConfig& c) {
  const LossClass loss = LossClass::parse(c.loss);
  const bool span = c.algo == "span";
  Setup s;
  if (c.synthetic == "planted") {
    auto base = std::make_shared<RandomFeaturePool>(c.pool_size, kInputDim, c.seed, c.bound);
    PlantedStream p =
        span ? planted_span_stream(base, random_span_weights(c.pool_size, c.l1, c.seed + 77), c.noise,
                                   c.rounds, kInputDim, c.seed + 1, loss)
             : planted_hull_stream(base, random_simplex_weights(c.pool_size, c.seed + 77), c.noise,
                                   c.rounds, kInputDim, c.seed + 1, loss);
    s.stream = std::move(p.stream);
    s.comparator = std::move(p.comparator);
    s.planted_pool = base;
    s.pool = span ? std::shared_ptr<const FunctionPool>(std::make_shared<SymmetricPool>(base)) : base;
    return s;
  }
  if (c.synthetic == "additive") {
    const Stream a = make_additive_stream(c.rounds, c.seed, kAdditiveComponents, kAdditiveBins, c.noise);
    s.stream = Stream(std::vector<Example>(a.begin(), a.end()), loss, a.source());
  } else {
    s.stream = parse_stream_file(c.data, {parse_format(c.format), parse_label_range(c.label_range), loss});
  }
  if (c.base == "hedge-pool" || c.base == "greedy") {
    auto features = feature_pool(s.stream, c.bound);
    s.pool = span ? std::shared_ptr<const FunctionPool>(std::make_shared<SymmetricPool>(features))
                  : features;
  }
  return s;
}

// The radius partial sums live in: B for the span booster (of the scaled
// class when lambda > 1), D for the hull booster.
double partial_sum_radius(const RunConfig& c) {
  if (c.algo != "span") return c.bound;
  const LossClass loss = LossClass::parse(c.loss);
  const double step = c.resolved_step();
  const double d = c.scale * c.bound;
  if (c.corollary_mode) return step * static_cast<double>(c.stages) * d;
  return solve_radius(loss, step, c.stages, d);
}

LearnerFactory base_factory(const RunConfig& c, const Setup& s) {
  const std::size_t horizon = s.stream.size();
  LearnerFactory f;
  if (c.base == "ogd") {
    OgdOptions o;
    o.bound = c.bound;
    o.learning_rate = c.learning_rate;
    f = [o](std::size_t) { return std::make_unique<OgdLearner>(o); };
  } else if (c.base == "stump") {
    StumpOptions o;
    o.bound = c.bound;
    o.learning_rate = c.learning_rate;
    f = [o](std::size_t) { return std::make_unique<StumpLearner>(o); };
  } else if (c.base == "hedge-pool") {
    auto pool = s.pool;
    f = [pool, horizon](std::size_t) {
      HedgeOptions o;
      o.horizon = horizon;
      return std::make_unique<HedgeLearner>(pool, o);
    };
  } else {
    // Each stage pays loss(y' + alpha f) with ||y'|| <= B, so the loss
    // constants are taken on the ball of radius B + D.
    const LossClass loss = LossClass::parse(c.loss);
    const double offsets = partial_sum_radius(c);
    const BallParams bp = loss.ball_params(offsets + c.bound);
    const double alpha = greedy_step_size(RegretModel::sqrt, std::sqrt(static_cast<double>(horizon)),
                                          bp.smoothness, c.bound, horizon);
    auto pool = s.pool;
    const double lipschitz = bp.lipschitz;
    f = [=](std::size_t) {
      return std::make_unique<GreedyAdapter>(std::make_unique<GreedyHedge>(pool, alpha, lipschitz, horizon),
                                             alpha, offsets);
    };
  }
  if (c.symmetrize) f = symmetrize(std::move(f), horizon);
  return f;
}

struct BuiltBooster {
  std::unique_ptr<Booster> booster;
  SpanBooster* span = nullptr;
};

BuiltBooster make_booster(const RunConfig& c, const LearnerFactory& factory) {
  const LossClass loss = LossClass::parse(c.loss);
  BuiltBooster b;
  if (c.algo == "span") {
    SpanBoosterOptions o;
    o.stages = c.stages;
    o.step = c.resolved_step();
    o.loss = loss;
    o.bound = c.bound;
    o.corollary_mode = c.corollary_mode;
    o.greedy_offsets = c.greedy_offsets;
    std::unique_ptr<SpanBooster> sb = c.scale != 1.0 ? make_scaled_span_booster(factory, o, c.scale)
                                                     : std::make_unique<SpanBooster>(factory, o);
    b.span = sb.get();
    b.booster = std::move(sb);
  } else {
    ChBoosterOptions o;
    o.stages = c.stages;
    o.loss = loss;
    o.bound = c.bound;
    o.greedy_offsets = c.greedy_offsets;
    b.booster = std::make_unique<ChBooster>(factory, o);
  }
  return b;
}

json loss_json(const RunMetrics& m) {
  return {{"total", m.total_loss()},
          {"mean", m.rounds() ? m.total_loss() / static_cast<double>(m.rounds()) : 0.0},
          {"tune_mean", m.tune_loss()},
          {"report_mean", m.report_loss()}};
}

}  // namespace

// ---------------------------------------------------------------------------
// run

int run_command(const RunConfig& c, std::ostream& out) {
  const Setup s = load(c);
  const LearnerFactory factory = base_factory(c, s);
  BuiltBooster b = make_booster(c, factory);

  const bool bounds = c.synthetic == "planted" && c.base == "hedge-pool" && !c.symmetrize && c.scale == 1.0;
  std::optional<StageRegretMeter> meter;
  if (bounds) {
    meter.emplace(s.pool, c.stages);
    b.booster->set_feedback_observer(meter->observer());
  }
  const RunMetrics m = progressive_validate(s.stream, *b.booster, c.split, &s.comparator);

  {
    std::string path;
    std::ofstream tsv = artifact(c, ".tsv", path);
    tsv << "round\ttest_loss\tcum_loss\tcum_regret\n";
    for (std::size_t t = 0; t < m.rounds(); ++t) {
      tsv << t + 1 << '\t' << g17(m.losses[t]) << '\t' << g17(m.cumulative_loss[t]) << '\t'
          << g17(m.cumulative_regret[t]) << '\n';
    }
    out << "trace: " << path << '\n';
  }

  const LossClass loss = LossClass::parse(c.loss);
  json resolved = {{"rounds", s.stream.size()},
                   {"stream", s.stream.source()},
                   {"comparator", to_string(s.comparator.kind)},
                   {"comparator_l1", s.comparator.l1},
                   {"pool_size", s.pool ? json(s.pool->size()) : json(nullptr)}};
  if (b.span) {
    resolved["step"] = b.span->step();
    resolved["radius"] = b.span->radius();
  }
  json totals = {{"loss", loss_json(m)},
                 {"comparator_loss", m.comparator_total()},
                 {"regret", m.regret()}};

  // A single copy of the base learner, trained on its own predictions and on
  // the zero-prediction gradient that stage 1 of the hull booster sees.
  if (c.base != "greedy") {
    json baselines = json::object();
    for (auto [key, mode] : {std::pair{"own_prediction", BaselineFeedback::own_prediction},
                             std::pair{"zero", BaselineFeedback::zero}}) {
      SingleLearner single(factory(0), loss, c.bound, mode);
      baselines[key] = loss_json(progressive_validate(s.stream, single, c.split));
    }
    totals["baseline"] = baselines;
  }

  std::vector<BoundReport> reports;
  if (bounds) {
    const double t = static_cast<double>(s.stream.size());
    if (b.span) {
      const BallParams& bp = b.span->ball();
      const double delta0 = zero_loss(s.stream) - m.comparator_total();
      const double bound = span_regret_bound({b.span->step(), c.stages, bp.radius, bp.lipschitz,
                                           bp.smoothness, s.comparator.l1, delta0, meter->max_regret(),
                                           s.stream.size()});
      reports.push_back(regret_report("span_regret", m.regret(), bound));
    } else {
      const HullSolution oracle = best_convex_hull(s.stream, *s.planted_pool);
      const BallParams bd = loss.ball_params(c.bound);
      const double bound = hull_regret_bound({c.stages, c.bound, bd.lipschitz, bd.smoothness,
                                           meter->max_regret(), s.stream.size()});
      totals["hull_oracle_loss"] = oracle.total_loss;
      reports.push_back(regret_report("hull_regret", m.total_loss() - oracle.total_loss, bound));
    }
    totals["max_stage_regret"] = meter->max_regret();
    totals["max_stage_regret_per_round"] = meter->max_regret() / t;
  }

  bool pass = true;
  json bound_list = json::array();
  for (const auto& r : reports) {
    bound_list.push_back(bound_json(r));
    pass = pass && r.pass;
  }
  const json summary = {{"command", "run"}, {"config", c},         {"resolved", resolved},
                        {"totals", totals}, {"bounds", bound_list}, {"pass", pass}};
  write_json(c, summary, out);

  out << b.booster->name() << " booster, N = " << c.stages;
  if (b.span) out << ", eta = " << g6(b.span->step()) << ", B = " << g6(b.span->radius());
  out << '\n';
  out << "booster loss " << g6(m.total_loss()) << " (report half mean " << g6(m.report_loss()) << ")\n";
  if (totals.contains("baseline")) {
    out << "single learner loss " << g6(totals["baseline"]["own_prediction"]["total"].get<double>())
        << " (report half mean " << g6(totals["baseline"]["own_prediction"]["report_mean"].get<double>())
        << ")\n";
  }
  for (const auto& r : reports) {
    out << r.name << ": measured " << g6(r.measured) << " <= bound " << g6(r.bound) << ": "
        << (r.pass ? "yes" : "NO") << '\n';
  }
  return c.assert_bounds && !pass ? kBoundViolated : kOk;
}

// ---------------------------------------------------------------------------
// batch-compare

int batch_compare_command(const RunConfig& c, std::ostream& out) {
  const PlantedBatchProblem p = make_planted_batch(c.functions, c.points, c.l1, c.seed);
  const double eta = c.eta == "auto" ? default_step(c.stages) : std::stod(c.eta);
  const std::vector<double> schedule(c.stages, eta);
  const BatchRun zy = run_batch(p.functional, p.dictionary, p.comparator, p.l1, schedule, BatchVariant::zy);
  const BatchRun gated =
      run_batch(p.functional, p.dictionary, p.comparator, p.l1, schedule, BatchVariant::gated);

  std::size_t zy_over = 0, gated_over = 0;
  {
    std::string path;
    std::ofstream tsv = artifact(c, ".tsv", path);
    tsv << "stage\ts_i\tdelta_zy\tzy_bound\tdelta_gated\tgated_bound\n";
    for (std::size_t i = 0; i < zy.rows.size(); ++i) {
      const auto& a = zy.rows[i];
      const auto& g = gated.rows[i];
      zy_over += a.delta > a.bound;
      gated_over += g.delta > g.bound;
      tsv << a.stage << '\t' << g17(a.s) << '\t' << g17(a.delta) << '\t' << g17(a.bound) << '\t'
          << g17(g.delta) << '\t' << g17(g.bound) << '\n';
    }
    out << "trace: " << path << '\n';
  }

  json crossings = json::array();
  for (int k = 1; k <= 5; ++k) {
    const double threshold = zy.delta0() / std::pow(2.0, k);
    const auto a = zy.first_below(threshold);
    const auto g = gated.first_below(threshold);
    crossings.push_back({{"k", k},
                         {"zy", a ? json(*a) : json(nullptr)},
                         {"gated", g ? json(*g) : json(nullptr)}});
  }
  const bool pass = zy_over == 0 && gated_over == 0;
  const json summary = {
      {"command", "batch-compare"},
      {"config", c},
      {"resolved", {{"step", eta}, {"l1", p.l1}, {"comparator_loss", zy.comparator_loss}}},
      {"totals",
       {{"delta0", zy.delta0()},
        {"final_delta_zy", zy.rows.back().delta},
        {"final_delta_gated", gated.rows.back().delta},
        {"stages_over_zy_bound", zy_over},
        {"stages_over_gated_bound", gated_over},
        {"first_below_delta0_over_2k", crossings}}},
      {"pass", pass}};
  write_json(c, summary, out);

  out << "delta0 " << g6(zy.delta0()) << "; after " << c.stages << " stages: zy " << g6(zy.rows.back().delta)
      << ", gated " << g6(gated.rows.back().delta) << '\n';
  out << "stages above their bound: zy " << zy_over << ", gated " << gated_over << '\n';
  return c.assert_bounds && !pass ? kBoundViolated : kOk;
}

// ---------------------------------------------------------------------------
// lower-bound

int lower_bound_command(const RunConfig& c, std::ostream& out) {
  std::vector<LowerBoundResult> results;
  for (std::size_t k = 0; k < c.seeds; ++k) results.push_back(run_lower_bound(c.stages, c.scale_c, c.seed + k));

  bool pass = true;
  double mean_regret = 0.0;
  json runs = json::array();
  {
    std::string path;
    std::ofstream tsv = artifact(c, ".tsv", path);
    tsv << "seed\trounds\tpool_size\tbooster_loss\tcomparator_loss\tregret\treference\tconcentration_holds\n";
    for (std::size_t k = 0; k < results.size(); ++k) {
      const auto& r = results[k];
      pass = pass && r.regret >= r.reference;
      mean_regret += r.regret / static_cast<double>(results.size());
      tsv << c.seed + k << '\t' << r.rounds << '\t' << r.pool_size << '\t' << g17(r.booster_loss) << '\t'
          << g17(r.comparator_loss) << '\t' << g17(r.regret) << '\t' << g17(r.reference) << '\t'
          << (r.concentration_holds ? 1 : 0) << '\n';
      runs.push_back({{"seed", c.seed + k},
                      {"regret", r.regret},
                      {"booster_loss", r.booster_loss},
                      {"comparator_loss", r.comparator_loss},
                      {"concentration_holds", r.concentration_holds}});
    }
    out << "trace: " << path << '\n';
  }
  const LowerBoundResult& first = results.front();
  const json summary = {{"command", "lower-bound"},
                        {"config", c},
                        {"resolved",
                         {{"rounds", first.rounds},
                          {"pool_size", first.pool_size},
                          {"epsilon", lower_bound_epsilon(c.stages)},
                          {"reference", first.reference},
                          {"concentration_limit", first.concentration_limit}}},
                        {"totals", {{"mean_regret", mean_regret}, {"runs", runs}}},
                        {"pass", pass}};
  write_json(c, summary, out);

  out << "N = " << c.stages << ", M = " << first.pool_size << ", T = " << first.rounds << ", c = " << g6(c.scale_c)
      << '\n';
  out << "measured regret " << g6(mean_regret);
  if (results.size() > 1) out << " (mean over " << results.size() << " seeds)";
  out << '\n';
  out << "reference c T / N = " << g6(first.reference) << '\n';
  return c.assert_bounds && !pass ? kBoundViolated : kOk;
}

// ---------------------------------------------------------------------------
// grid

int grid_command(const RunConfig& c, std::ostream& out) {
  const Setup s = load(c);
  const std::vector<std::optional<double>> rates =
      c.grid_learning_rates.empty() ? std::vector<std::optional<double>>{c.learning_rate}
                                    : std::vector<std::optional<double>>(c.grid_learning_rates.begin(),
                                                                         c.grid_learning_rates.end());
  const std::vector<std::size_t> stages = c.grid_stages.empty() ? std::vector{c.stages} : c.grid_stages;
  const std::vector<std::string> etas = c.grid_eta.empty() ? std::vector{c.eta} : c.grid_eta;

  std::vector<RunConfig> children;
  std::vector<GridPoint> grid;
  for (const auto& rate : rates) {
    for (std::size_t n : stages) {
      for (const std::string& eta : etas) {
        RunConfig child = c;
        child.command = "run";
        child.learning_rate = rate;
        child.stages = n;
        child.eta = eta;
        GridPoint p;
        p.learning_rate = rate.value_or(0.0);
        p.stages = n;
        if (c.algo == "span") p.step = child.resolved_step();
        grid.push_back(p);
        children.push_back(std::move(child));
      }
    }
  }

  // Points are matched back to their child config by position.
  auto run_point = [&](const GridPoint& p) {
    const std::size_t i = static_cast<std::size_t>(&p - grid.data());
    const RunConfig& child = children.at(i);
    BuiltBooster b = make_booster(child, base_factory(child, s));
    return progressive_validate(s.stream, *b.booster, child.split);
  };
  const GridSelection sel = grid_search(grid, run_point, c.workers);

  json results = json::array();
  {
    std::string path;
    std::ofstream tsv = artifact(c, ".tsv", path);
    tsv << "point\tlearning_rate\tstages\teta\ttune_loss\treport_loss\tselected\n";
    for (std::size_t i = 0; i < sel.results.size(); ++i) {
      const GridResult& r = sel.results[i];
      const std::string lr = children[i].learning_rate ? g17(*children[i].learning_rate) : "default";
      const std::string eta = r.point.step ? g17(*r.point.step) : "-";
      tsv << i << '\t' << lr << '\t' << r.point.stages << '\t' << eta << '\t' << g17(r.tune_loss) << '\t'
          << g17(r.report_loss) << '\t' << (i == sel.selected ? 1 : 0) << '\n';
      results.push_back({{"point", i},
                         {"learning_rate", children[i].learning_rate ? json(*children[i].learning_rate)
                                                                     : json(nullptr)},
                         {"stages", r.point.stages},
                         {"eta", children[i].eta},
                         {"step", r.point.step ? json(*r.point.step) : json(nullptr)},
                         {"tune_loss", r.tune_loss},
                         {"report_loss", r.report_loss}});
    }
    out << "trace: " << path << '\n';
  }
  const GridResult& best = sel.results[sel.selected];
  const json summary = {{"command", "grid"},
                        {"config", c},
                        {"resolved", {{"points", grid.size()}, {"rule", sel.rule}}},
                        {"totals",
                         {{"selected", sel.selected},
                          {"selected_report_loss", best.report_loss},
                          {"selected_config", children[sel.selected]},
                          {"results", results}}},
                        {"pass", true}};
  write_json(c, summary, out);

  out << grid.size() << " runs; selection rule: " << sel.rule << '\n';
  out << "selected point " << sel.selected << ": stages " << best.point.stages;
  if (children[sel.selected].learning_rate) out << ", learning rate " << g6(*children[sel.selected].learning_rate);
  if (best.point.step) out << ", eta " << g6(*best.point.step);
  out << ", tune loss " << g6(best.tune_loss) << ", report loss " << g6(best.report_loss) << '\n';
  return kOk;
}

}  // namespace ogb::cli
