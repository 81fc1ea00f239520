#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>

#include "ogb/core.hpp"
#include "ogb/losses.hpp"

namespace ogb {

/// Raised when a caller breaks a learner or booster protocol.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The linear loss y -> gradient . y handed to a base learner.
struct LinearFeedback {
  Prediction gradient;
};

inline constexpr double kFeedbackTolerance = 1e-9;

/// Online linear learner over a D-bounded function class.
///
/// Protocol per round: predict(x), then update(x, feedback) with a feedback
/// vector of norm at most 1. Every prediction has norm at most output_bound().
///
/// Learners that fit the actual loss (greedy fitting) additionally receive
/// the booster's partial sum as an offset before predict() and the round's
/// loss before update(); plain linear learners ignore both hooks.
class BaseLearner {
 public:
  virtual ~BaseLearner() = default;

  virtual Prediction predict(const Example& x) = 0;
  virtual void update(const Example& x, const LinearFeedback& feedback) = 0;

  virtual double output_bound() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual bool is_deterministic() const { return true; }

  virtual bool accepts_offsets() const { return false; }
  virtual void set_offset(const Prediction& /*offset*/) {}
  virtual void set_round_loss(const LossInstance& /*loss*/) {}

 protected:
  /// Throws ContractViolation when the feedback norm exceeds 1 + kFeedbackTolerance
  /// or its dimension differs from output_dim().
  void check_feedback(const LinearFeedback& feedback) const;
};

/// Builds the i-th independent copy of a base learner.
using LearnerFactory = std::function<std::unique_ptr<BaseLearner>(std::size_t copy)>;

}  // namespace ogb
