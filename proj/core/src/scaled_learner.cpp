#include "ogb/scaled_learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ogb {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("scale factor lambda must be >= 1, got " + std::to_string(lambda));
  }
}

}  // namespace

ScaledLearner::ScaledLearner(std::unique_ptr<BaseLearner> inner, double lambda)
    : inner_(std::move(inner)), lambda_(lambda) {
  if (!inner_) throw std::invalid_argument("scaled learner needs an inner learner");
  check_lambda(lambda);
}

Prediction ScaledLearner::predict(const Example& x) {
  Prediction y = inner_->predict(x);
  if (lambda_ != 1.0) y *= lambda_;
  return y;
}

void ScaledLearner::update(const Example& x, const LinearFeedback& feedback) {
  check_feedback(feedback);
  inner_->update(x, feedback);
}

LearnerFactory scale_learners(LearnerFactory inner, double lambda) {
  check_lambda(lambda);
  if (!inner) throw std::invalid_argument("scale_learners needs a learner factory");
  return [inner = std::move(inner), lambda](std::size_t copy) -> std::unique_ptr<BaseLearner> {
    return std::make_unique<ScaledLearner>(inner(copy), lambda);
  };
}

}  // namespace ogb
