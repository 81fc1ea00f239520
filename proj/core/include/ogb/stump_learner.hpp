#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>

#include "ogb/learner.hpp"

namespace ogb {

struct StumpOptions {
  double bound = 1.0;  // D
  // Base rate c for eta = c / sqrt(n_j), n_j the updates feature j has seen.
  // Unset: eta = D / (G_j sqrt(n_j)) with G_j the largest |x_j| seen.
  std::optional<double> learning_rate;
};

/// Online regression stumps: one scalar model w_j x_j per feature.
///
/// The prediction uses the present feature whose model has the lowest
/// cumulative linear loss so far (ties to the lowest id), clipped to [-D, D].
/// An example without features predicts 0. Every present feature's model is
/// updated each round, whether or not it was the one selected. Output is 1-d.
class StumpLearner final : public BaseLearner {
 public:
  explicit StumpLearner(StumpOptions options = {});

  Prediction predict(const Example& x) override;
  void update(const Example& x, const LinearFeedback& feedback) override;

  double output_bound() const override { return options_.bound; }
  std::size_t output_dim() const override { return 1; }

  /// Feature the next predict(x) would use, or nullopt for an empty example.
  std::optional<FeatureId> selected_feature(const Example& x) const;
  double weight(FeatureId id) const;
  double cumulative_loss(FeatureId id) const;

 private:
  struct Model {
    double weight = 0.0;
    double cumulative_loss = 0.0;
    double max_abs_value = 0.0;
    std::size_t updates = 0;
  };

  double output(const Model* m, double value) const;

  StumpOptions options_;
  std::unordered_map<FeatureId, Model> models_;
};

}  // namespace ogb
