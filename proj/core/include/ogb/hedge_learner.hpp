#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ogb/function_pool.hpp"
#include "ogb/learner.hpp"
#include "ogb/random.hpp"

namespace ogb {

/// Exponential weights over a fixed number of arms.
///
/// Rate eps = sqrt(8 ln M / T) / range for losses spanning an interval of width
/// `range`. With no horizon the doubling trick runs epochs of length 1, 2, 4, ...
/// and restarts from uniform weights at each epoch. Weights are kept in log space.
class ExpWeights {
 public:
  ExpWeights(std::size_t arms, double range, std::optional<std::size_t> horizon = std::nullopt);

  std::size_t arms() const noexcept { return log_weights_.size(); }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double rate() const noexcept { return rate_; }
  std::size_t rounds() const noexcept { return rounds_; }

  void observe(std::span<const double> losses);

 private:
  void start_epoch(std::size_t length);
  void refresh();

  std::vector<double> log_weights_;
  std::vector<double> probabilities_;
  double range_;
  std::optional<std::size_t> horizon_;
  double rate_ = 0.0;
  std::size_t epoch_length_ = 1;
  std::size_t epoch_round_ = 0;
  std::size_t rounds_ = 0;
};

enum class HedgeMode {
  mixture,  // predict the weighted average of the pool (deterministic)
  sample,   // predict one pool member drawn from the weights
};

struct HedgeOptions {
  std::optional<std::size_t> horizon;
  HedgeMode mode = HedgeMode::mixture;
  std::uint64_t seed = 0;  // sample mode only
};

/// Hedge over a finite function pool, fed linear losses g * f_i(x).
///
/// Weights move after the round's feedback arrives. The sampling mode is what
/// the lower-bound experiment needs: its pool average sits right on the
/// comparator, so a mixture would hide the gap being measured.
class HedgeLearner final : public BaseLearner {
 public:
  HedgeLearner(std::shared_ptr<const FunctionPool> pool, HedgeOptions options = {});

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return pool_->bound(); }
  std::size_t output_dim() const override { return 1; }
  bool is_deterministic() const override { return options_.mode == HedgeMode::mixture; }

  std::span<const double> weights() const noexcept { return weights_.probabilities(); }
  const FunctionPool& pool() const noexcept { return *pool_; }

 private:
  const std::vector<double>& values_for(const Example& x);

  std::shared_ptr<const FunctionPool> pool_;
  HedgeOptions options_;
  ExpWeights weights_;
  Rng rng_;
  std::vector<double> values_;
  std::vector<double> losses_;
  std::optional<Example> cached_;
};

}  // namespace ogb
