#include "ogb/ogd_learner.hpp"

#include <cmath>
#include <stdexcept>

namespace ogb {

OgdLearner::OgdLearner(OgdOptions options) : options_(options) {
  if (!(options_.bound > 0.0) || !std::isfinite(options_.bound)) {
    throw std::invalid_argument("OGD output bound must be positive");
  }
  if (options_.dim == 0) throw std::invalid_argument("OGD output dimension must be positive");
  if (options_.learning_rate && !(*options_.learning_rate > 0.0)) {
    throw std::invalid_argument("OGD learning rate must be positive");
  }
}

std::size_t OgdLearner::slot(FeatureId id) {
  auto [it, inserted] = slots_.try_emplace(id, slots_.size());
  if (inserted) v_.resize(v_.size() + options_.dim, 0.0);
  return it->second;
}

Prediction OgdLearner::predict(const Example& x) {
  Prediction y(options_.dim);
  for (const Feature& f : x.features()) {
    auto it = slots_.find(f.id);
    if (it == slots_.end()) continue;
    const double* w = v_.data() + it->second * options_.dim;
    for (std::size_t k = 0; k < options_.dim; ++k) y[k] += w[k] * f.value;
  }
  y *= scale_;
  // ||W x|| can exceed D when ||x|| > 1.
  return project(y, options_.bound);
}

void OgdLearner::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  ++rounds_;
  const double xn = x.feature_norm();
  if (xn > max_feature_norm_) max_feature_norm_ = xn;
  if (xn == 0.0 || feedback.gradient.norm() == 0.0) return;

  const double root_t = std::sqrt(static_cast<double>(rounds_));
  const double eta = options_.learning_rate ? *options_.learning_rate / root_t
                                            : options_.bound / (max_feature_norm_ * root_t);
  const double step = eta / scale_;
  for (const Feature& f : x.features()) {
    const std::size_t at = slot(f.id);  // may grow v_
    double* w = v_.data() + at * options_.dim;
    for (std::size_t k = 0; k < options_.dim; ++k) {
      const double old = w[k];
      w[k] -= step * feedback.gradient[k] * f.value;
      v_sq_norm_ += w[k] * w[k] - old * old;
    }
  }
  if (v_sq_norm_ < 0.0) v_sq_norm_ = 0.0;

  const double n = scale_ * std::sqrt(v_sq_norm_);
  if (n > options_.bound) scale_ *= options_.bound / n;
  if (scale_ < 1e-100 || rounds_ % 4096 == 0) renormalize();
}

void OgdLearner::renormalize() {
  double sq = 0.0;
  for (double& w : v_) {
    w *= scale_;
    sq += w * w;
  }
  scale_ = 1.0;
  v_sq_norm_ = sq;
  const double n = std::sqrt(sq);
  if (n > options_.bound) {
    const double s = options_.bound / n;
    for (double& w : v_) w *= s;
    v_sq_norm_ = sq * s * s;
  }
}

double OgdLearner::weight(FeatureId id, std::size_t out) const {
  if (out >= options_.dim) throw std::out_of_range("OGD output coordinate");
  auto it = slots_.find(id);
  if (it == slots_.end()) return 0.0;
  return scale_ * v_[it->second * options_.dim + out];
}

double OgdLearner::weight_norm() const {
  double sq = 0.0;
  for (double w : v_) sq += w * w;
  return scale_ * std::sqrt(sq);
}

}  // namespace ogb
