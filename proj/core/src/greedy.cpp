#include "ogb/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ogb {

double greedy_step_size(RegretModel model, double regret, double smoothness, double bound,
                        std::size_t horizon) {
  if (!(smoothness > 0.0)) throw std::invalid_argument("greedy step size needs beta > 0");
  if (!(bound > 0.0)) throw std::invalid_argument("greedy step size needs D > 0");
  if (horizon == 0) throw std::invalid_argument("greedy step size needs T > 0");
  if (!(regret >= 0.0)) throw std::invalid_argument("regret estimate must be non-negative");
  const double denom = smoothness * bound * bound * static_cast<double>(horizon);
  switch (model) {
    case RegretModel::sqrt: return std::sqrt(2.0 * regret / denom);
    case RegretModel::alpha_linear: return 2.0 * regret / denom;
  }
  return 0.0;
}

GreedyAdapter::GreedyAdapter(std::unique_ptr<GreedyBaseLearner> inner, double step,
                             double offset_bound)
    : inner_(std::move(inner)), step_(step), offset_bound_(offset_bound) {
  if (!inner_) throw std::invalid_argument("greedy adapter needs an inner learner");
  if (!(step >= 0.0) || !std::isfinite(step)) throw std::invalid_argument("greedy step must be >= 0");
  if (!(offset_bound > 0.0)) throw std::invalid_argument("offset bound must be positive");
}

void GreedyAdapter::set_offset(const Prediction& offset) {
  const double n = offset.norm();
  if (!(n <= offset_bound_ * (1.0 + 1e-12) + 1e-12)) {
    throw ContractViolation("offset norm " + std::to_string(n) + " exceeds declared bound " +
                            std::to_string(offset_bound_));
  }
  offset_ = offset;
}

void GreedyAdapter::set_round_loss(const LossInstance& loss) { loss_ = loss; }

Prediction GreedyAdapter::predict(const Example& x) {
  if (!offset_) offset_ = Prediction::zeros(output_dim());
  return inner_->predict(x, *offset_);
}

void GreedyAdapter::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  if (!loss_) throw ContractViolation("greedy adapter updated without the round's loss");
  if (!offset_) offset_ = Prediction::zeros(output_dim());
  inner_->update(x, *offset_, step_, *loss_);
  offset_.reset();
  loss_.reset();
}

GreedyHedge::GreedyHedge(std::shared_ptr<const FunctionPool> pool, double step, double lipschitz,
                         std::optional<std::size_t> horizon)
    : pool_(pool ? std::move(pool) : throw std::invalid_argument("greedy Hedge needs a pool")),
      // A zero range means every member pays the same loss; any positive width works.
      weights_(pool_->size(),
               step * lipschitz > 0.0 ? 2.0 * step * pool_->bound() * lipschitz : 1.0, horizon),
      values_(pool_->size()),
      losses_(pool_->size()) {}

Prediction GreedyHedge::predict(const Example& x, const Prediction& /*offset*/) {
  pool_->evaluate(x, values_);
  const auto p = weights_.probabilities();
  double y = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) y += p[i] * values_[i];
  return project(Prediction{y}, pool_->bound());
}

void GreedyHedge::update(const Example& x, const Prediction& offset, double step,
                         const LossInstance& loss) {
  pool_->evaluate(x, values_);
  // Shifting by loss(y') leaves the weights unchanged and centres the range.
  const double base = loss.evaluate(offset);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    Prediction y = offset;
    y[0] += step * values_[i];
    losses_[i] = loss.evaluate(y) - base;
  }
  weights_.observe(losses_);
}

GreedyOgd::GreedyOgd(double bound) : bound_(bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("greedy OGD bound must be positive");
}

double GreedyOgd::raw(const Example& x) const {
  double s = 0.0;
  for (const Feature& f : x.features()) {
    auto it = weights_.find(f.id);
    if (it != weights_.end()) s += it->second * f.value;
  }
  return s;
}

Prediction GreedyOgd::predict(const Example& x, const Prediction& /*offset*/) {
  return Prediction{std::clamp(raw(x), -bound_, bound_)};
}

void GreedyOgd::update(const Example& x, const Prediction& offset, double step,
                       const LossInstance& loss) {
  ++rounds_;
  const double xn = x.feature_norm();
  max_feature_norm_ = std::max(max_feature_norm_, xn);
  Prediction y = offset;
  y[0] += step * std::clamp(raw(x), -bound_, bound_);
  const double g = step * loss.gradient(y)[0];
  max_gradient_ = std::max(max_gradient_, std::abs(g) * xn);
  if (g == 0.0 || xn == 0.0) return;

  const double radius = bound_ / max_feature_norm_;
  const double eta = radius / (max_gradient_ * std::sqrt(static_cast<double>(rounds_)));
  double sq = 0.0;
  for (const Feature& f : x.features()) weights_[f.id] -= eta * g * f.value;
  for (const auto& [id, w] : weights_) sq += w * w;
  const double n = std::sqrt(sq);
  if (n > radius) {
    for (auto& [id, w] : weights_) w *= radius / n;
  }
}

}  // namespace ogb
