#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ogb/learner.hpp"
#include "ogb/losses.hpp"

namespace ogb {

/// Everything one round of a stagewise booster computed.
struct StageTrace {
  std::uint64_t round = 0;               // 1-based round this trace belongs to
  std::vector<Prediction> partial_sums;  // y^0 .. y^N, y^0 = 0
  std::vector<Prediction> arm_outputs;   // A^1(x) .. A^N(x)

  const Prediction& output() const { return partial_sums.back(); }
};

/// Called once per stage per update with the stage index (0-based), the
/// example, that stage's learner output and the feedback it received.
using FeedbackObserver = std::function<void(std::size_t stage, const Example& x,
                                            const Prediction& arm_output,
                                            const LinearFeedback& feedback)>;

/// Online predictor driven by convex losses. Strictly predict, then update.
class Booster {
 public:
  virtual ~Booster() = default;

  virtual Prediction predict(const Example& x) = 0;
  virtual void update(const Example& x, const LossInstance& loss) = 0;
  virtual std::string name() const = 0;
  virtual std::size_t output_dim() const = 0;

  void set_feedback_observer(FeedbackObserver observer) { observer_ = std::move(observer); }

 protected:
  FeedbackObserver observer_;
};

struct SpanBoosterOptions {
  std::size_t stages = 10;     // N
  std::optional<double> step;  // eta in [1/N, 1]; unset uses default_step(N)
  LossClass loss = LossClass::squared();
  double bound = 1.0;  // D, the learners' output bound
  // Deterministic learners only: B = eta N D, for which projection never fires.
  bool corollary_mode = false;
  // Hand each learner its stage's incoming partial sum (greedy fitting).
  bool greedy_offsets = false;
};

/// Boosting for span(F).
///
/// Per round, with y^0 = 0 and sigma^i in [0, 1]:
///   y^i = Pi_B((1 - sigma^i eta) y^{i-1} + eta A^i(x))
/// and after the loss is revealed, stage i gets g^i = grad(y^{i-1}) / L_B and
///   sigma^i <- clip(sigma^i + grad(y^{i-1}) . y^{i-1} / (L_B B sqrt(t))).
class SpanBooster final : public Booster {
 public:
  SpanBooster(const LearnerFactory& factory, SpanBoosterOptions options);

  const StageTrace& predict_trace(const Example& x);
  /// Throws ContractViolation unless `trace` is the pending trace of this round.
  void update_trace(const Example& x, const StageTrace& trace, const LossInstance& loss);

  Prediction predict(const Example& x) override { return predict_trace(x).output(); }
  void update(const Example& x, const LossInstance& loss) override;
  std::string name() const override { return "span"; }
  std::size_t output_dim() const override { return dim_; }

  std::size_t stages() const noexcept { return learners_.size(); }
  double step() const noexcept { return step_; }
  double radius() const noexcept { return ball_.radius; }
  const BallParams& ball() const noexcept { return ball_; }
  std::span<const double> sigma() const noexcept { return sigma_; }
  std::uint64_t rounds() const noexcept { return round_; }
  BaseLearner& learner(std::size_t stage) { return *learners_.at(stage); }

  /// clip(sigma + grad(y^{i-1}) . y^{i-1} / (L_B B sqrt(t))) for global round t >= 1.
  static double shrinkage_update(double sigma, double grad_dot_prev, double lipschitz,
                                 double radius, std::uint64_t round);

 private:
  SpanBoosterOptions options_;
  std::vector<std::unique_ptr<BaseLearner>> learners_;
  std::size_t dim_ = 1;
  double step_;
  BallParams ball_;
  std::vector<double> sigma_;
  std::uint64_t round_ = 0;
  bool pending_ = false;
  StageTrace trace_;
};

struct ChBoosterOptions {
  std::size_t stages = 10;  // N
  LossClass loss = LossClass::squared();
  double bound = 1.0;  // D
  bool greedy_offsets = false;
};

/// Boosting for the convex hull CH(F).
///
/// y^i = (1 - eta_i) y^{i-1} + eta_i A^i(x) with eta_i = 2 / (i + 1), and stage
/// i gets g^i = grad(y^{i-1}) / L_D. Stage 1 copies A^1(x) exactly.
class ChBooster final : public Booster {
 public:
  ChBooster(const LearnerFactory& factory, ChBoosterOptions options);

  const StageTrace& predict_trace(const Example& x);
  void update_trace(const Example& x, const StageTrace& trace, const LossInstance& loss);

  Prediction predict(const Example& x) override { return predict_trace(x).output(); }
  void update(const Example& x, const LossInstance& loss) override;
  std::string name() const override { return "ch"; }
  std::size_t output_dim() const override { return dim_; }

  std::size_t stages() const noexcept { return learners_.size(); }
  double lipschitz() const noexcept { return lipschitz_; }
  std::uint64_t rounds() const noexcept { return round_; }
  BaseLearner& learner(std::size_t stage) { return *learners_.at(stage); }

  static double stage_step(std::size_t stage) { return 2.0 / (static_cast<double>(stage) + 1.0); }

 private:
  ChBoosterOptions options_;
  std::vector<std::unique_ptr<BaseLearner>> learners_;
  std::size_t dim_ = 1;
  double lipschitz_;
  std::uint64_t round_ = 0;
  bool pending_ = false;
  StageTrace trace_;
};

enum class BaselineFeedback {
  own_prediction,  // g = grad(A(x)) / L_D, the usual way to train a single learner
  zero,            // g = grad(0) / L_D, what stage 1 of the hull booster sees
};

/// A single base learner driven as a booster, for baselines.
class SingleLearner final : public Booster {
 public:
  SingleLearner(std::unique_ptr<BaseLearner> learner, LossClass loss, double bound,
                BaselineFeedback feedback = BaselineFeedback::own_prediction);

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LossInstance& loss) override;
  std::string name() const override { return "single"; }
  std::size_t output_dim() const override { return learner_->output_dim(); }

 private:
  std::unique_ptr<BaseLearner> learner_;
  double lipschitz_;
  BaselineFeedback feedback_;
  std::optional<Prediction> pending_;
};

/// Lambda-scaling of the base class: learners are wrapped as lambda * A and the
/// span booster runs with D' = lambda D, hence B' = solve_radius(eta, N, lambda D).
struct ScalingConfig {
  double lambda = 1.0;
  double radius = 0.0;  // B'

  static ScalingConfig make(const LossClass& loss, double step, std::size_t stages, double bound,
                            double lambda);

  /// ||f||'_1 = max(1, ||f||_1 / lambda) for a representation of l1 norm `l1`.
  double scaled_norm(double l1) const;
};

/// Span booster over lambda-scaled copies; options.bound is the unscaled D.
std::unique_ptr<SpanBooster> make_scaled_span_booster(LearnerFactory factory,
                                                      SpanBoosterOptions options, double lambda);

}  // namespace ogb
