#include "ogb/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ogb/hedge_learner.hpp"
#include "ogb/random.hpp"
#include "ogb/synthetic.hpp"

namespace ogb {

double RunMetrics::comparator_total() const {
  double s = 0.0;
  for (double l : comparator_losses) s += l;
  return s;
}

double RunMetrics::tune_loss() const {
  if (split_round == 0) return 0.0;
  double s = 0.0;
  for (std::size_t t = 0; t < split_round; ++t) s += losses[t];
  return s / static_cast<double>(split_round);
}

double RunMetrics::report_loss() const {
  if (split_round >= losses.size()) return 0.0;
  double s = 0.0;
  for (std::size_t t = split_round; t < losses.size(); ++t) s += losses[t];
  return s / static_cast<double>(losses.size() - split_round);
}

RunMetrics progressive_validate(const Stream& stream, Booster& booster, double split,
                                const ComparatorSpec* comparator) {
  if (!(split >= 0.0 && split <= 1.0)) throw std::invalid_argument("split must lie in [0, 1]");
  RunMetrics m;
  const std::size_t n = stream.size();
  m.split_round = static_cast<std::size_t>(std::floor(split * static_cast<double>(n)));
  m.losses.reserve(n);
  m.cumulative_loss.reserve(n);
  double cumulative = 0.0, cumulative_comparator = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const Example& x = stream[t];
    const LossInstance loss = stream.loss_at(t);
    // The loss is recorded before update() can touch any state.
    const double l = loss.evaluate(booster.predict(x));
    m.losses.push_back(l);
    cumulative += l;
    m.cumulative_loss.push_back(cumulative);
    if (comparator) {
      const double c = loss.evaluate(comparator->evaluate(x));
      m.comparator_losses.push_back(c);
      cumulative_comparator += c;
      m.cumulative_regret.push_back(cumulative - cumulative_comparator);
    }
    booster.update(x, loss);
  }
  return m;
}

StageRegretMeter::StageRegretMeter(std::shared_ptr<const FunctionPool> pool, std::size_t stages)
    : pool_(std::move(pool)),
      learner_loss_(stages, 0.0),
      pool_loss_(stages, std::vector<double>(pool_ ? pool_->size() : 0, 0.0)),
      values_(pool_ ? pool_->size() : 0) {
  if (!pool_) throw std::invalid_argument("regret meter needs a pool");
  if (stages == 0) throw std::invalid_argument("regret meter needs at least one stage");
}

FeedbackObserver StageRegretMeter::observer() {
  return [this](std::size_t stage, const Example& x, const Prediction& arm,
                const LinearFeedback& fb) {
    if (stage >= learner_loss_.size()) throw std::out_of_range("regret meter stage");
    if (!cached_ || !(*cached_ == x)) {
      pool_->evaluate(x, values_);
      cached_ = x;
    }
    const double g = fb.gradient[0];
    learner_loss_[stage] += g * arm[0];
    auto& losses = pool_loss_[stage];
    for (std::size_t k = 0; k < values_.size(); ++k) losses[k] += g * values_[k];
  };
}

double StageRegretMeter::stage_regret(std::size_t stage) const {
  const auto& losses = pool_loss_.at(stage);
  return learner_loss_.at(stage) - *std::min_element(losses.begin(), losses.end());
}

double StageRegretMeter::max_regret() const {
  double r = stage_regret(0);
  for (std::size_t i = 1; i < stages(); ++i) r = std::max(r, stage_regret(i));
  return r;
}

double span_regret_bound(const SpanBoundInputs& in) {
  const double w = in.l1;
  const double t = static_cast<double>(in.rounds);
  const double shrink = std::pow(1.0 - in.step / w, static_cast<double>(in.stages));
  return shrink * in.delta0 + 3.0 * in.step * in.smoothness * in.radius * in.radius * w * t +
         in.lipschitz * w * in.base_regret + 2.0 * in.lipschitz * in.radius * w * std::sqrt(t);
}

double hull_regret_bound(const HullBoundInputs& in) {
  if (in.stages == 0) throw std::invalid_argument("stages must be positive");
  return 8.0 * in.smoothness * in.bound * in.bound * static_cast<double>(in.rounds) /
             static_cast<double>(in.stages) +
         in.lipschitz * in.base_regret;
}

BoundReport regret_report(std::string name, double measured, double bound) {
  BoundReport r;
  r.name = std::move(name);
  r.measured = measured;
  r.bound = bound;
  r.ratio = bound != 0.0 ? measured / bound : (measured <= 0.0 ? 0.0 : INFINITY);
  r.pass = measured <= bound;
  return r;
}

LowerBoundResult run_lower_bound(std::size_t stages, double c, std::uint64_t seed,
                                 std::optional<std::size_t> rounds) {
  const std::size_t t = rounds ? *rounds : lower_bound_min_rounds(stages, c);
  const LowerBoundSetup setup = make_lower_bound_stream(stages, t, seed, c);
  std::shared_ptr<const FunctionPool> pool = setup.pool;
  const Rng learner_seeds(splitmix64(seed) ^ 0x4ed6e5eedULL);
  LearnerFactory factory = [&](std::size_t copy) -> std::unique_ptr<BaseLearner> {
    HedgeOptions opts;
    opts.horizon = t;
    opts.mode = HedgeMode::sample;
    opts.seed = learner_seeds.split(copy).seed();
    return std::make_unique<HedgeLearner>(pool, opts);
  };
  ChBoosterOptions options;
  options.stages = stages;
  options.loss = LossClass::squared();
  options.bound = 1.0;
  ChBooster booster(factory, options);
  const RunMetrics m = progressive_validate(setup.stream, booster, 1.0);

  LowerBoundResult r;
  r.stages = stages;
  r.pool_size = setup.pool->size();
  r.rounds = t;
  r.c = c;
  r.booster_loss = m.total_loss();
  r.comparator_loss = uniform_hull(setup.stream, *setup.pool).total_loss;
  r.regret = r.booster_loss - r.comparator_loss;
  r.reference = c * static_cast<double>(t) / static_cast<double>(stages);
  r.concentration_limit = static_cast<double>(t) / static_cast<double>(r.pool_size);
  r.concentration_holds = r.comparator_loss <= r.concentration_limit;
  return r;
}

GridSelection grid_search(const std::vector<GridPoint>& grid,
                          const std::function<RunMetrics(const GridPoint&)>& run,
                          std::size_t workers) {
  if (grid.empty()) throw std::invalid_argument("grid must not be empty");
  GridSelection sel;
  sel.results.resize(grid.size());
  sel.rule = "lowest tuning-half loss; ties to the smaller learning rate";
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, grid.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const RunMetrics m = run(grid[i]);
        sel.results[i] = {grid[i], m.tune_loss(), m.report_loss()};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);

  for (std::size_t i = 1; i < sel.results.size(); ++i) {
    const auto& a = sel.results[i];
    const auto& b = sel.results[sel.selected];
    if (a.tune_loss < b.tune_loss ||
        (a.tune_loss == b.tune_loss && a.point.learning_rate < b.point.learning_rate)) {
      sel.selected = i;
    }
  }
  return sel;
}

}  // namespace ogb
