#include "ogb/symmetrized_learner.hpp"

#include <algorithm>
#include <stdexcept>

namespace ogb {

namespace {

double checked_bound(const std::unique_ptr<BaseLearner>& a, const std::unique_ptr<BaseLearner>& b) {
  if (!a || !b) throw std::invalid_argument("symmetrize needs two learner copies");
  if (a->output_dim() != b->output_dim()) {
    throw std::invalid_argument("symmetrized copies disagree on output dimension");
  }
  return std::max(a->output_bound(), b->output_bound());
}

}  // namespace

SymmetrizedLearner::SymmetrizedLearner(std::unique_ptr<BaseLearner> positive,
                                       std::unique_ptr<BaseLearner> negative,
                                       std::optional<std::size_t> horizon)
    : positive_(std::move(positive)),
      negative_(std::move(negative)),
      bound_(checked_bound(positive_, negative_)),
      mixer_(3, 2.0 * bound_, horizon) {}

Prediction SymmetrizedLearner::predict(const Example& x) {
  arms_[0] = positive_->predict(x);
  arms_[1] = -negative_->predict(x);
  arms_[2] = Prediction::zeros(output_dim());
  pending_ = true;
  const auto p = mixer_.probabilities();
  Prediction y = p[0] * arms_[0] + p[1] * arms_[1];
  return project(y, bound_);
}

void SymmetrizedLearner::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  if (!pending_) predict(x);
  pending_ = false;
  const std::array<double, 3> losses{dot(feedback.gradient, arms_[0]),
                                     dot(feedback.gradient, arms_[1]), 0.0};
  mixer_.observe(losses);
  positive_->update(x, feedback);
  negative_->update(x, LinearFeedback{-feedback.gradient});
}

LearnerFactory symmetrize(LearnerFactory inner, std::optional<std::size_t> horizon) {
  if (!inner) throw std::invalid_argument("symmetrize needs a learner factory");
  return [inner = std::move(inner), horizon](std::size_t copy) -> std::unique_ptr<BaseLearner> {
    auto positive = inner(2 * copy);
    auto negative = inner(2 * copy + 1);
    return std::make_unique<SymmetrizedLearner>(std::move(positive), std::move(negative), horizon);
  };
}

}  // namespace ogb
