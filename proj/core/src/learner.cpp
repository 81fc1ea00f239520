#include "ogb/learner.hpp"

#include <string>

namespace ogb {

void BaseLearner::check_feedback(const LinearFeedback& feedback) const {
  if (feedback.gradient.dim() != output_dim()) {
    throw ContractViolation("feedback dimension " + std::to_string(feedback.gradient.dim()) +
                            " does not match learner output dimension " +
                            std::to_string(output_dim()));
  }
  const double n = feedback.gradient.norm();
  if (!(n <= 1.0 + kFeedbackTolerance)) {
    throw ContractViolation("linear feedback norm " + std::to_string(n) + " exceeds 1");
  }
}

}  // namespace ogb
