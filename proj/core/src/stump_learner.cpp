#include "ogb/stump_learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ogb {

StumpLearner::StumpLearner(StumpOptions options) : options_(options) {
  if (!(options_.bound > 0.0) || !std::isfinite(options_.bound)) {
    throw std::invalid_argument("stump output bound must be positive");
  }
  if (options_.learning_rate && !(*options_.learning_rate > 0.0)) {
    throw std::invalid_argument("stump learning rate must be positive");
  }
}

double StumpLearner::output(const Model* m, double value) const {
  if (m == nullptr) return 0.0;
  return std::clamp(m->weight * value, -options_.bound, options_.bound);
}

std::optional<FeatureId> StumpLearner::selected_feature(const Example& x) const {
  std::optional<FeatureId> best;
  double best_loss = 0.0;
  // Features are sorted by id, so a strict comparison keeps the lowest id on ties.
  for (const Feature& f : x.features()) {
    auto it = models_.find(f.id);
    const double loss = it == models_.end() ? 0.0 : it->second.cumulative_loss;
    if (!best || loss < best_loss) {
      best = f.id;
      best_loss = loss;
    }
  }
  return best;
}

Prediction StumpLearner::predict(const Example& x) {
  const auto id = selected_feature(x);
  if (!id) return Prediction{0.0};
  auto it = models_.find(*id);
  return Prediction{output(it == models_.end() ? nullptr : &it->second, x.value(*id))};
}

void StumpLearner::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  const double g = feedback.gradient[0];
  for (const Feature& f : x.features()) {
    Model& m = models_[f.id];
    m.cumulative_loss += g * output(&m, f.value);
    ++m.updates;
    m.max_abs_value = std::max(m.max_abs_value, std::abs(f.value));
    const double root_n = std::sqrt(static_cast<double>(m.updates));
    const double eta = options_.learning_rate ? *options_.learning_rate / root_n
                                              : options_.bound / (m.max_abs_value * root_n);
    // Weights live in |w_j| <= D / G_j, which keeps |w_j x_j| <= D.
    const double cap = options_.bound / m.max_abs_value;
    m.weight = std::clamp(m.weight - eta * g * f.value, -cap, cap);
  }
}

double StumpLearner::weight(FeatureId id) const {
  auto it = models_.find(id);
  return it == models_.end() ? 0.0 : it->second.weight;
}

double StumpLearner::cumulative_loss(FeatureId id) const {
  auto it = models_.find(id);
  return it == models_.end() ? 0.0 : it->second.cumulative_loss;
}

}  // namespace ogb
