#include "ogb/losses.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ogb {

namespace {

double softplus(double z) {
  // ln(1 + e^z) without overflow.
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_same_dim(const Prediction& label, const Prediction& y) {
  if (label.dim() != y.dim()) throw std::invalid_argument("label and prediction dimensions differ");
}

}  // namespace

LossClass LossClass::p_norm(double p) {
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("p-norm loss needs p >= 2");
  return LossClass(LossFamily::p_norm, p);
}

LossClass LossClass::parse(std::string_view spec) {
  if (spec == "linear") return linear();
  if (spec == "mls" || spec == "modified-least-squares") return modified_least_squares();
  if (spec == "logistic") return logistic();
  if (spec == "squared") return squared();
  constexpr std::string_view prefix = "p-norm";
  if (spec.starts_with(prefix)) {
    std::string_view rest = spec.substr(prefix.size());
    if (rest.empty()) return p_norm(2.0);
    if (rest.front() != ':') throw std::invalid_argument("bad loss spec '" + std::string(spec) + "'");
    rest.remove_prefix(1);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), p);
    if (ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw std::invalid_argument("bad p-norm exponent in '" + std::string(spec) + "'");
    }
    return p_norm(p);
  }
  throw std::invalid_argument("unknown loss '" + std::string(spec) +
                              "' (expected linear, p-norm:<p>, mls, logistic or squared)");
}

std::string LossClass::name() const {
  switch (family_) {
    case LossFamily::linear: return "linear";
    case LossFamily::p_norm: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p_);
      return "p-norm:" + std::string(buf, ptr);
    }
    case LossFamily::modified_least_squares: return "mls";
    case LossFamily::logistic: return "logistic";
    case LossFamily::squared: return "squared";
  }
  return "unknown";
}

double LossClass::evaluate(const Prediction& label, const Prediction& y) const {
  require_same_dim(label, y);
  switch (family_) {
    case LossFamily::linear: return -dot(label, y);
    case LossFamily::p_norm: return std::pow((y - label).norm(), p_);
    case LossFamily::modified_least_squares: {
      const double m = std::max(1.0 - dot(label, y), 0.0);
      return 0.5 * m * m;
    }
    case LossFamily::logistic: return softplus(-dot(label, y));
    case LossFamily::squared: {
      const double n = (y - label).norm();
      return 0.5 * n * n;
    }
  }
  return 0.0;
}

Prediction LossClass::gradient(const Prediction& label, const Prediction& y) const {
  require_same_dim(label, y);
  switch (family_) {
    case LossFamily::linear: return -label;
    case LossFamily::p_norm: {
      Prediction z = y - label;
      const double n = z.norm();
      if (n == 0.0) return Prediction::zeros(y.dim());
      return (p_ * std::pow(n, p_ - 2.0)) * z;
    }
    case LossFamily::modified_least_squares: {
      const double m = std::max(1.0 - dot(label, y), 0.0);
      return (-m) * label;
    }
    case LossFamily::logistic: {
      // d/dy ln(1 + exp(-y*.y)) = -y* / (1 + exp(y*.y))
      return (-sigmoid(-dot(label, y))) * label;
    }
    case LossFamily::squared: return y - label;
  }
  return Prediction::zeros(y.dim());
}

BallParams LossClass::ball_params(double b) const {
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("ball radius must be positive");
  switch (family_) {
    case LossFamily::linear: return {b, 1.0, 0.0, 1.0};
    case LossFamily::p_norm: {
      const double p = p_;
      const double eps = b >= 1.0 ? 0.0 : std::max(p * std::pow(1.0 - b, p - 1.0), 0.0);
      return {b, p * std::pow(b + 1.0, p - 1.0), p * (p - 1.0) * std::pow(b + 1.0, p - 2.0), eps};
    }
    case LossFamily::modified_least_squares: return {b, b + 1.0, 1.0, std::max(1.0 - b, 0.0)};
    case LossFamily::logistic:
      return {b, sigmoid(b), 0.25, sigmoid(-b)};
    case LossFamily::squared: return {b, b + 1.0, 1.0, std::max(1.0 - b, 0.0)};
  }
  return {b, 0.0, 0.0, 0.0};
}

void validate_step(double step, std::size_t stages) {
  if (stages == 0) throw std::invalid_argument("number of stages must be positive");
  const double lo = 1.0 / static_cast<double>(stages);
  constexpr double slack = 1e-12;
  if (!std::isfinite(step) || step < lo - slack || step > 1.0 + slack) {
    throw std::invalid_argument("step size " + std::to_string(step) + " outside [1/N, 1] = [" +
                                std::to_string(lo) + ", 1] for N = " + std::to_string(stages));
  }
}

double default_step(std::size_t stages) {
  if (stages == 0) throw std::invalid_argument("number of stages must be positive");
  const double n = static_cast<double>(stages);
  return std::clamp(std::log(n) / n, 1.0 / n, 1.0);
}

std::optional<double> closed_form_radius(const LossClass& loss, double step, std::size_t stages,
                                         double bound) {
  validate_step(step, stages);
  const double cap = step * static_cast<double>(stages) * bound;
  switch (loss.family()) {
    case LossFamily::linear: return cap;
    case LossFamily::p_norm:
    case LossFamily::modified_least_squares:
      if (bound == 1.0) return std::min(cap, 1.0);
      return std::nullopt;
    case LossFamily::logistic:
      if (bound == 1.0) return std::min(cap, std::log(4.0 / step));
      return std::nullopt;
    case LossFamily::squared: return std::nullopt;
  }
  return std::nullopt;
}

double radius_by_bisection(const LossClass& loss, double step, std::size_t stages, double bound) {
  validate_step(step, stages);
  if (!(bound > 0.0)) throw std::invalid_argument("output bound D must be positive");
  const double lo0 = bound;
  const double hi0 = step * static_cast<double>(stages) * bound;
  auto gap = [&](double b) {
    const BallParams bp = loss.ball_params(b);
    return step * bp.smoothness * b * b - bp.projection_penalty * bound;
  };

  constexpr int kProbes = 64;
  double prev = gap(lo0);
  for (int k = 1; k <= kProbes && hi0 > lo0; ++k) {
    const double b = lo0 + (hi0 - lo0) * k / kProbes;
    const double g = gap(b);
    if (g < prev - 1e-12 * (1.0 + std::abs(prev))) {
      throw std::domain_error("radius search: feasibility gap is not monotone for loss " +
                              loss.name());
    }
    prev = g;
  }

  if (gap(lo0) >= 0.0) return lo0;
  if (gap(hi0) < 0.0) return hi0;
  double lo = lo0, hi = hi0;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= 0.0 ? hi : lo) = mid;
  }
  return hi;
}

double solve_radius(const LossClass& loss, double step, std::size_t stages, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("output bound D must be positive");
  if (auto closed = closed_form_radius(loss, step, stages, bound)) return *closed;
  return radius_by_bisection(loss, step, stages, bound);
}

}  // namespace ogb
