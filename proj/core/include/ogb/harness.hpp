#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ogb/boosting.hpp"
#include "ogb/function_pool.hpp"
#include "ogb/oracle.hpp"
#include "ogb/stream.hpp"

namespace ogb {

/// Per-round progressive-validation record of one run.
struct RunMetrics {
  std::vector<double> losses;             // booster test loss, before training on the round
  std::vector<double> comparator_losses;  // empty without a comparator
  std::vector<double> cumulative_loss;
  std::vector<double> cumulative_regret;  // empty without a comparator
  std::size_t split_round = 0;            // rounds [0, split_round) form the tuning half

  std::size_t rounds() const noexcept { return losses.size(); }
  double total_loss() const { return cumulative_loss.empty() ? 0.0 : cumulative_loss.back(); }
  double comparator_total() const;
  double regret() const { return total_loss() - comparator_total(); }
  double tune_loss() const;    // mean over the tuning half
  double report_loss() const;  // mean over the report half
};

/// Strict test-then-train over the stream. The first floor(split * T) rounds
/// are the tuning half.
RunMetrics progressive_validate(const Stream& stream, Booster& booster, double split = 0.5,
                                const ComparatorSpec* comparator = nullptr);

/// Realized linear regret of every stage's learner against the best fixed
/// member of a pool, fed through a booster's feedback observer.
class StageRegretMeter {
 public:
  StageRegretMeter(std::shared_ptr<const FunctionPool> pool, std::size_t stages);

  /// Observer to install on a booster; the meter must outlive the booster's use of it.
  FeedbackObserver observer();

  /// sum_t g_t . A(x_t) - min_f sum_t g_t . f(x_t) for one stage.
  double stage_regret(std::size_t stage) const;
  double max_regret() const;
  std::size_t stages() const noexcept { return learner_loss_.size(); }

 private:
  std::shared_ptr<const FunctionPool> pool_;
  std::vector<double> learner_loss_;
  std::vector<std::vector<double>> pool_loss_;
  std::vector<double> values_;
  std::optional<Example> cached_;
};

struct SpanBoundInputs {
  double step = 0.0;         // eta
  std::size_t stages = 0;    // N
  double radius = 0.0;       // B
  double lipschitz = 0.0;    // L_B
  double smoothness = 0.0;   // beta_B
  double l1 = 1.0;           // ||f||_1
  double delta0 = 0.0;       // sum_t l_t(0) - l_t(f(x_t))
  double base_regret = 0.0;  // R(T)
  std::size_t rounds = 0;    // T
};

struct HullBoundInputs {
  std::size_t stages = 0;
  double bound = 1.0;        // D
  double lipschitz = 0.0;    // L_D
  double smoothness = 0.0;   // beta_D
  double base_regret = 0.0;  // R(T)
  std::size_t rounds = 0;
};

/// (1 - eta/W)^N D0 + 3 eta beta_B B^2 W T + L_B W R + 2 L_B B W sqrt(T).
double span_regret_bound(const SpanBoundInputs& in);
/// 8 beta_D D^2 T / N + L_D R.
double hull_regret_bound(const HullBoundInputs& in);

struct BoundReport {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // measured / bound
  bool pass = false;   // measured <= bound
};

BoundReport regret_report(std::string name, double measured, double bound);

/// One run of the lower-bound experiment.
struct LowerBoundResult {
  std::size_t stages = 0;
  std::size_t pool_size = 0;
  std::size_t rounds = 0;
  double c = 0.0;
  double booster_loss = 0.0;
  double comparator_loss = 0.0;  // uniform average of the pool
  double regret = 0.0;
  double reference = 0.0;        // c T / N
  double concentration_limit = 0.0;  // T / M
  bool concentration_holds = false;  // comparator_loss <= T / M
};

/// Hull booster with N stages over sampling Hedge on the Bernoulli pool, run on
/// make_lower_bound_stream(N, rounds, seed, c). `rounds` defaults to 12 M.
LowerBoundResult run_lower_bound(std::size_t stages, double c, std::uint64_t seed,
                                 std::optional<std::size_t> rounds = std::nullopt);

/// One grid point: a learning rate, stage count and step size.
struct GridPoint {
  double learning_rate = 0.0;
  std::size_t stages = 1;
  std::optional<double> step;
};

struct GridResult {
  GridPoint point;
  double tune_loss = 0.0;
  double report_loss = 0.0;
};

struct GridSelection {
  std::vector<GridResult> results;  // in grid order
  std::size_t selected = 0;
  std::string rule;
};

/// Evaluates every point (on up to `workers` threads) and selects the lowest
/// tuning-half loss, breaking ties towards the smaller learning rate, then the
/// earlier grid position. `run` must be safe to call concurrently.
GridSelection grid_search(const std::vector<GridPoint>& grid,
                          const std::function<RunMetrics(const GridPoint&)>& run,
                          std::size_t workers = 0);

}  // namespace ogb
