#pragma once

#include <memory>
#include <vector>

#include "ogb/learner.hpp"

namespace ogb::test {

/// Predicts a fixed value and records the feedback it receives.
class ConstantLearner final : public BaseLearner {
 public:
  explicit ConstantLearner(Prediction value, double bound = 1.0)
      : value_(std::move(value)), bound_(bound) {}

  Prediction predict(const Example&) override { return value_; }
  void update(const Example&, const LinearFeedback& fb) override {
    check_feedback(fb);
    feedback.push_back(fb.gradient);
  }
  double output_bound() const override { return bound_; }
  std::size_t output_dim() const override { return value_.dim(); }

  std::vector<Prediction> feedback;

 private:
  Prediction value_;
  double bound_;
};

inline Example point(std::vector<Feature> features, double label, std::uint64_t index = 0) {
  return Example(std::move(features), Prediction{label}, index);
}

}  // namespace ogb::test
