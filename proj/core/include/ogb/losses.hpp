#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "ogb/core.hpp"

namespace ogb {

enum class LossFamily { linear, p_norm, modified_least_squares, logistic, squared };

/// Regularity constants of a loss class on the ball of radius `radius`.
struct BallParams {
  double radius = 0.0;
  double lipschitz = 0.0;           // L_b: bound on the subgradient norm
  double smoothness = 0.0;          // beta_b
  double projection_penalty = 0.0;  // eps_b: loss increase per unit of projection distance
};

/// A family of convex losses l(y*, y), instantiated per round with the label.
///
/// Closed forms, with z = y - y*:
///   linear                  -y*.y
///   p-norm (p >= 2)         |z|^p
///   modified least squares  1/2 max(1 - y*.y, 0)^2
///   logistic                ln(1 + exp(-y*.y))
///   squared                 1/2 |z|^2
///
/// The ball parameters assume labels of norm at most 1. For squared loss the
/// projection penalty max(1 - b, 0) is our own derivation (it mirrors modified
/// least squares); the other families use the published constants.
class LossClass {
 public:
  static LossClass linear() { return LossClass(LossFamily::linear); }
  static LossClass p_norm(double p);
  static LossClass modified_least_squares() { return LossClass(LossFamily::modified_least_squares); }
  static LossClass logistic() { return LossClass(LossFamily::logistic); }
  static LossClass squared() { return LossClass(LossFamily::squared); }

  /// Parses the command-line spelling: linear | p-norm:<p> | mls | logistic | squared.
  static LossClass parse(std::string_view spec);

  LossFamily family() const noexcept { return family_; }
  double exponent() const noexcept { return p_; }
  /// Inverse of parse().
  std::string name() const;

  double evaluate(const Prediction& label, const Prediction& y) const;
  Prediction gradient(const Prediction& label, const Prediction& y) const;

  /// Throws std::invalid_argument unless radius > 0.
  BallParams ball_params(double radius) const;

  friend bool operator==(const LossClass&, const LossClass&) = default;

 private:
  explicit LossClass(LossFamily family, double p = 2.0) : family_(family), p_(p) {}

  LossFamily family_ = LossFamily::squared;
  double p_ = 2.0;
};

/// The round's loss l_t = l(y*_t, .).
class LossInstance {
 public:
  LossInstance(LossClass loss, Prediction label) : loss_(loss), label_(std::move(label)) {}

  double evaluate(const Prediction& y) const { return loss_.evaluate(label_, y); }
  Prediction gradient(const Prediction& y) const { return loss_.gradient(label_, y); }

  const LossClass& loss_class() const noexcept { return loss_; }
  const Prediction& label() const noexcept { return label_; }

 private:
  LossClass loss_;
  Prediction label_;
};

/// Throws std::invalid_argument unless step lies in [1/stages, 1].
void validate_step(double step, std::size_t stages);

/// Default step ln(N)/N, clamped into [1/N, 1] (ln(N)/N < 1/N for N < 3).
double default_step(std::size_t stages);

/// Working radius of the span booster:
///   B = min{ step*N*D, inf{b >= D : step*beta_b*b^2 >= eps_b*D} }.
///
/// Uses the published closed form when one exists (linear for any D; p-norm,
/// modified least squares and logistic for D = 1) and radius_by_bisection()
/// otherwise. Note that the logistic closed form min{step*N, ln(4/step)} is a
/// feasible radius, not the infimum.
double solve_radius(const LossClass& loss, double step, std::size_t stages, double bound);

/// The closed form alone, or nullopt when the family has none for this bound.
std::optional<double> closed_form_radius(const LossClass& loss, double step, std::size_t stages,
                                         double bound);

/// Bisection on [D, step*N*D] to relative tolerance 1e-9, falling back to
/// step*N*D when the inequality never holds there. A 64-point probe checks that
/// step*beta_b*b^2 - eps_b*D is nondecreasing and throws std::domain_error if not.
double radius_by_bisection(const LossClass& loss, double step, std::size_t stages, double bound);

}  // namespace ogb
