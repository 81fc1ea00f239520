#include "ogb/hedge_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ogb {

ExpWeights::ExpWeights(std::size_t arms, double range, std::optional<std::size_t> horizon)
    : log_weights_(arms, 0.0), probabilities_(arms, 0.0), range_(range), horizon_(horizon) {
  if (arms == 0) throw std::invalid_argument("exponential weights need at least one arm");
  if (!(range > 0.0) || !std::isfinite(range)) throw std::invalid_argument("loss range must be positive");
  if (horizon_ && *horizon_ == 0) throw std::invalid_argument("horizon must be positive");
  start_epoch(horizon_ ? *horizon_ : 1);
}

void ExpWeights::start_epoch(std::size_t length) {
  epoch_length_ = length;
  epoch_round_ = 0;
  std::fill(log_weights_.begin(), log_weights_.end(), 0.0);
  const double m = static_cast<double>(arms());
  rate_ = std::sqrt(8.0 * std::log(m) / static_cast<double>(length)) / range_;
  refresh();
}

void ExpWeights::refresh() {
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  double total = 0.0;
  for (std::size_t i = 0; i < arms(); ++i) {
    probabilities_[i] = std::exp(log_weights_[i] - top);
    total += probabilities_[i];
  }
  for (double& p : probabilities_) p /= total;
}

void ExpWeights::observe(std::span<const double> losses) {
  if (losses.size() != arms()) throw std::invalid_argument("loss vector size differs from arm count");
  ++rounds_;
  for (std::size_t i = 0; i < arms(); ++i) log_weights_[i] -= rate_ * losses[i];
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& w : log_weights_) w -= top;
  ++epoch_round_;
  if (!horizon_ && epoch_round_ == epoch_length_) {
    start_epoch(2 * epoch_length_);
  } else {
    refresh();
  }
}

HedgeLearner::HedgeLearner(std::shared_ptr<const FunctionPool> pool, HedgeOptions options)
    : pool_(pool ? std::move(pool) : throw std::invalid_argument("Hedge needs a function pool")),
      options_(options),
      weights_(pool_->size(), 2.0 * pool_->bound(), options.horizon),
      rng_(options.seed),
      values_(pool_->size()),
      losses_(pool_->size()) {}

const std::vector<double>& HedgeLearner::values_for(const Example& x) {
  if (!cached_ || !(*cached_ == x)) {
    pool_->evaluate(x, values_);
    cached_ = x;
  }
  return values_;
}

Prediction HedgeLearner::predict(const Example& x) {
  const auto& v = values_for(x);
  const auto p = weights_.probabilities();
  if (options_.mode == HedgeMode::sample) {
    double u = rng_.uniform();
    std::size_t pick = p.size() - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (u < p[i]) {
        pick = i;
        break;
      }
      u -= p[i];
    }
    return Prediction{v[pick]};
  }
  double y = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) y += p[i] * v[i];
  return project(Prediction{y}, pool_->bound());
}

void HedgeLearner::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  const auto& v = values_for(x);
  const double g = feedback.gradient[0];
  for (std::size_t i = 0; i < v.size(); ++i) losses_[i] = g * v[i];
  weights_.observe(losses_);
}

}  // namespace ogb
