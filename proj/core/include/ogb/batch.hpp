#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ogb/losses.hpp"

namespace ogb {

// Batch stagewise boosting over a finite dictionary.
//
// Functions are represented by their values on the m batch points. The
// function-space norm is the RMS over those points, so for squared loss the
// functional (1/m) sum_j l_j(f(x_j)) is 1-smooth, and the gradient pairing is
// grad(f) . g = (1/m) sum_j l_j'(f(x_j)) g(x_j).

/// Dictionary columns, each of RMS at most 1, closed under negation and
/// containing the zero function.
class Dictionary {
 public:
  /// Validates the invariants; throws std::invalid_argument otherwise.
  explicit Dictionary(std::vector<std::vector<double>> columns);

  /// [g_1 .. g_K, -g_1 .. -g_K, 0].
  static Dictionary symmetric_closure(const std::vector<std::vector<double>>& base);

  std::size_t size() const noexcept { return columns_.size(); }
  std::size_t points() const noexcept { return points_; }
  std::span<const double> column(std::size_t k) const { return columns_.at(k); }

 private:
  std::vector<std::vector<double>> columns_;
  std::size_t points_ = 0;
};

/// l(f) = (1/m) sum_j loss(y*_j, f(x_j)) for scalar labels.
class BatchFunctional {
 public:
  /// `smoothness` defaults to the loss family's constant smoothness; p-norm
  /// losses (whose smoothness depends on the radius) must pass it explicitly.
  BatchFunctional(LossClass loss, std::vector<double> labels,
                  std::optional<double> smoothness = std::nullopt);

  std::size_t points() const noexcept { return labels_.size(); }
  double smoothness() const noexcept { return beta_; }
  const LossClass& loss() const noexcept { return loss_; }

  double value(std::span<const double> f) const;
  /// Per-point derivatives l_j'(f(x_j)), not divided by m.
  std::vector<double> derivatives(std::span<const double> f) const;
  /// grad(f) . g.
  double pairing(std::span<const double> f, std::span<const double> g) const;

 private:
  LossClass loss_;
  std::vector<double> labels_;
  double beta_;
};

struct BatchIterate {
  std::vector<double> coefficients;  // over the dictionary
  std::vector<double> values;        // on the batch points
  double s = 1.0;                    // s_0 = 1, s_i = s_{i-1} + eta_i
  std::size_t stage = 0;
  int sigma = 0;  // gate of the step that produced this iterate
};

BatchIterate zero_iterate(const Dictionary& dict);

/// argmin_k l(f + eta g_k) by exhaustive evaluation; ties go to the lowest index.
std::size_t base_argmin(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                        double eta);

/// f + eta A(f, eta). Requires eta >= 0.
BatchIterate zy_step(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                     double eta);

/// (1 - sigma eta) f + eta A(f, eta), sigma = [grad(f) . f >= 0]. Requires eta in [0, 1].
BatchIterate gated_step(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                        double eta);

enum class BatchVariant { zy, gated };

/// Error bound after the given steps for the ungated recursion:
///   (s0 + W)/(sN + W) D0 + sum_i (s_i + W)/(sN + W) (beta/2) eta_i^2.
double zy_bound(double delta0, double l1, double beta, std::span<const double> steps,
                double s0 = 1.0);

/// Error bound after the given steps for the gated recursion:
///   exp(-(sN - s0)/W) D0 + sum_i exp(-(sN - s_i)/W) (beta/2) eta_i^2 (s_i^2 + 1).
double gated_bound(double delta0, double l1, double beta, std::span<const double> steps,
                   double s0 = 1.0);

struct BatchTraceRow {
  std::size_t stage = 0;
  double s = 1.0;
  double delta = 0.0;  // l(f_i) - l(f)
  double bound = 0.0;  // zy_bound for zy runs, gated_bound for gated runs
  int sigma = 0;
};

struct BatchRun {
  BatchVariant variant = BatchVariant::zy;
  double comparator_loss = 0.0;
  std::vector<BatchTraceRow> rows;  // stages 0..N

  double delta0() const { return rows.front().delta; }
  /// First stage whose error is strictly below `threshold`.
  std::optional<std::size_t> first_below(double threshold) const;
};

/// Runs N = schedule.size() stages. `comparator` holds the values of the
/// reference f on the batch points and `l1` its norm ||f||_1.
BatchRun run_batch(const BatchFunctional& fun, const Dictionary& dict,
                   std::span<const double> comparator, double l1, std::span<const double> schedule,
                   BatchVariant variant);

/// A least-squares problem with a planted comparator: `functions` random base
/// columns of RMS 1 on `points` points, and labels sum_k w_k g_k with
/// sum |w_k| = l1.
struct PlantedBatchProblem {
  Dictionary dictionary;
  BatchFunctional functional;
  std::vector<double> comparator;
  std::vector<double> weights;
  double l1 = 1.0;
};

PlantedBatchProblem make_planted_batch(std::size_t functions, std::size_t points, double l1,
                                       std::uint64_t seed);

}  // namespace ogb
