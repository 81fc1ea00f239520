#pragma once

#include <array>
#include <memory>
#include <optional>

#include "ogb/hedge_learner.hpp"
#include "ogb/learner.hpp"

namespace ogb {

/// Makes a learner for F compete with F, -F and 0.
///
/// Arms are (A1(x), -A2(x), 0); A1 is fed g and A2 is fed -g. The output is
/// the exponential-weights mixture of the three arms.
class SymmetrizedLearner final : public BaseLearner {
 public:
  SymmetrizedLearner(std::unique_ptr<BaseLearner> positive, std::unique_ptr<BaseLearner> negative,
                     std::optional<std::size_t> horizon = std::nullopt);

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return bound_; }
  std::size_t output_dim() const override { return positive_->output_dim(); }
  bool is_deterministic() const override {
    return positive_->is_deterministic() && negative_->is_deterministic();
  }

  std::span<const double> weights() const noexcept { return mixer_.probabilities(); }

 private:
  std::unique_ptr<BaseLearner> positive_;
  std::unique_ptr<BaseLearner> negative_;
  double bound_;
  ExpWeights mixer_;
  std::array<Prediction, 3> arms_;
  bool pending_ = false;
};

/// Factory whose copy k wraps copies 2k and 2k+1 of `inner`.
LearnerFactory symmetrize(LearnerFactory inner, std::optional<std::size_t> horizon = std::nullopt);

}  // namespace ogb
