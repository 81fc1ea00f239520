#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ogb/function_pool.hpp"
#include "ogb/hedge_learner.hpp"
#include "ogb/learner.hpp"

namespace ogb {

/// A learner that fits the actual loss around an offset.
///
/// Each round it sees x and an offset y', predicts a = A(x), and then pays
/// loss(y' + step * a). Its regret is measured against the best fixed f
/// paying loss(y' + step * f(x)).
class GreedyBaseLearner {
 public:
  virtual ~GreedyBaseLearner() = default;

  virtual Prediction predict(const Example& x, const Prediction& offset) = 0;
  virtual void update(const Example& x, const Prediction& offset, double step,
                      const LossInstance& loss) = 0;

  virtual double output_bound() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual bool is_deterministic() const { return true; }
};

enum class RegretModel {
  sqrt,          // alpha = sqrt(2 R / (beta D^2 T))
  alpha_linear,  // alpha = 2 R' / (beta D^2 T), for regret of the form alpha * R'
};

/// Greedy step size from a regret estimate R (or R') of the inner learner.
/// Throws std::invalid_argument when beta, D or T is not positive or R < 0.
double greedy_step_size(RegretModel model, double regret, double smoothness, double bound,
                        std::size_t horizon);

/// Exposes a greedy learner through the linear-feedback contract.
///
/// The booster hands over its partial sum with set_offset() before predict()
/// and the round's loss with set_round_loss() before update(); the linear
/// feedback itself is only checked, not used.
class GreedyAdapter final : public BaseLearner {
 public:
  GreedyAdapter(std::unique_ptr<GreedyBaseLearner> inner, double step, double offset_bound);

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return inner_->output_bound(); }
  std::size_t output_dim() const override { return inner_->output_dim(); }
  bool is_deterministic() const override { return inner_->is_deterministic(); }

  bool accepts_offsets() const override { return true; }
  /// Throws ContractViolation when ||offset|| exceeds the declared offset bound.
  void set_offset(const Prediction& offset) override;
  void set_round_loss(const LossInstance& loss) override;

  double step() const noexcept { return step_; }

 private:
  std::unique_ptr<GreedyBaseLearner> inner_;
  double step_;
  double offset_bound_;
  std::optional<Prediction> offset_;
  std::optional<LossInstance> loss_;
};

/// Exponential weights over a pool, each member charged loss(y' + step * f(x)).
/// `lipschitz` bounds the loss gradient near the offsets and sets the loss range
/// 2 * step * D * lipschitz. Predicts the weighted mixture.
class GreedyHedge final : public GreedyBaseLearner {
 public:
  GreedyHedge(std::shared_ptr<const FunctionPool> pool, double step, double lipschitz,
              std::optional<std::size_t> horizon = std::nullopt);

  Prediction predict(const Example& x, const Prediction& offset) override;
  void update(const Example& x, const Prediction& offset, double step,
              const LossInstance& loss) override;

  double output_bound() const override { return pool_->bound(); }
  std::size_t output_dim() const override { return 1; }

  std::span<const double> weights() const noexcept { return weights_.probabilities(); }

 private:
  std::shared_ptr<const FunctionPool> pool_;
  ExpWeights weights_;
  std::vector<double> values_;
  std::vector<double> losses_;
};

/// Projected gradient descent on w -> loss(y' + step * w.x), ||w|| <= D / max||x||.
class GreedyOgd final : public GreedyBaseLearner {
 public:
  explicit GreedyOgd(double bound = 1.0);

  Prediction predict(const Example& x, const Prediction& offset) override;
  void update(const Example& x, const Prediction& offset, double step,
              const LossInstance& loss) override;

  double output_bound() const override { return bound_; }
  std::size_t output_dim() const override { return 1; }

 private:
  double raw(const Example& x) const;

  double bound_;
  std::unordered_map<FeatureId, double> weights_;
  double max_feature_norm_ = 0.0;
  double max_gradient_ = 0.0;
  std::size_t rounds_ = 0;
};

}  // namespace ogb
