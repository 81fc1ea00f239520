#pragma once

#include <memory>

#include "ogb/learner.hpp"

namespace ogb {

/// lambda * A: predictions multiplied by lambda >= 1, feedback passed through.
/// A booster driving scaled learners must use lambda * D as its output bound.
class ScaledLearner final : public BaseLearner {
 public:
  ScaledLearner(std::unique_ptr<BaseLearner> inner, double lambda);

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return lambda_ * inner_->output_bound(); }
  std::size_t output_dim() const override { return inner_->output_dim(); }
  bool is_deterministic() const override { return inner_->is_deterministic(); }

  bool accepts_offsets() const override { return inner_->accepts_offsets(); }
  void set_offset(const Prediction& offset) override { inner_->set_offset(offset); }
  void set_round_loss(const LossInstance& loss) override { inner_->set_round_loss(loss); }

  double lambda() const noexcept { return lambda_; }

 private:
  std::unique_ptr<BaseLearner> inner_;
  double lambda_;
};

/// Factory of lambda-scaled copies. Throws std::invalid_argument for lambda < 1.
LearnerFactory scale_learners(LearnerFactory inner, double lambda);

}  // namespace ogb
