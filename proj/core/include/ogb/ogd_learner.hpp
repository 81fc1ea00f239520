#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ogb/learner.hpp"

namespace ogb {

struct OgdOptions {
  double bound = 1.0;  // D
  std::size_t dim = 1;
  // Base rate c for eta_t = c / sqrt(t). Unset: eta_t = D / (G sqrt(t)) with G the
  // largest feature norm seen so far.
  std::optional<double> learning_rate;
};

/// Projected online gradient descent over linear maps x -> W x with ||W||_F <= D.
///
/// W is stored as scale * V so the ball projection is O(1); only the entries
/// touched by the current example change per update.
class OgdLearner final : public BaseLearner {
 public:
  explicit OgdLearner(OgdOptions options = {});

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return options_.bound; }
  std::size_t output_dim() const override { return options_.dim; }

  /// Current weight of one feature for one output coordinate.
  double weight(FeatureId id, std::size_t out = 0) const;
  double weight_norm() const;
  std::size_t rounds() const noexcept { return rounds_; }

 private:
  std::size_t slot(FeatureId id);
  void renormalize();

  OgdOptions options_;
  std::unordered_map<FeatureId, std::size_t> slots_;
  std::vector<double> v_;  // slots x dim
  double scale_ = 1.0;
  double v_sq_norm_ = 0.0;
  double max_feature_norm_ = 0.0;
  std::size_t rounds_ = 0;
};

}  // namespace ogb
