#include "ogb/batch.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ogb/random.hpp"

namespace ogb {

namespace {

double rms(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq / static_cast<double>(v.size()));
}

}  // namespace

Dictionary::Dictionary(std::vector<std::vector<double>> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("dictionary must not be empty");
  points_ = columns_.front().size();
  if (points_ == 0) throw std::invalid_argument("dictionary needs at least one batch point");
  bool has_zero = false;
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    const auto& c = columns_[k];
    if (c.size() != points_) throw std::invalid_argument("dictionary columns differ in length");
    for (double v : c) {
      if (!std::isfinite(v)) throw std::invalid_argument("dictionary value is not finite");
    }
    if (rms(c) > 1.0 + 1e-12) {
      throw std::invalid_argument("dictionary column " + std::to_string(k) + " has norm above 1");
    }
    bool zero = true;
    for (double v : c) zero = zero && v == 0.0;
    has_zero = has_zero || zero;
  }
  if (!has_zero) throw std::invalid_argument("dictionary must contain the zero function");
  for (std::size_t k = 0; k < columns_.size(); ++k) {
    bool found = false;
    for (std::size_t l = 0; l < columns_.size() && !found; ++l) {
      bool neg = true;
      for (std::size_t j = 0; j < points_ && neg; ++j) neg = columns_[l][j] == -columns_[k][j];
      found = neg;
    }
    if (!found) {
      throw std::invalid_argument("dictionary is not closed under negation (column " +
                                  std::to_string(k) + ")");
    }
  }
}

Dictionary Dictionary::symmetric_closure(const std::vector<std::vector<double>>& base) {
  if (base.empty()) throw std::invalid_argument("dictionary must not be empty");
  std::vector<std::vector<double>> cols = base;
  for (const auto& c : base) {
    std::vector<double> neg(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
    cols.push_back(std::move(neg));
  }
  cols.emplace_back(base.front().size(), 0.0);
  return Dictionary(std::move(cols));
}

BatchFunctional::BatchFunctional(LossClass loss, std::vector<double> labels,
                                 std::optional<double> smoothness)
    : loss_(loss), labels_(std::move(labels)) {
  if (labels_.empty()) throw std::invalid_argument("batch functional needs labels");
  if (smoothness) {
    beta_ = *smoothness;
  } else if (loss_.family() == LossFamily::p_norm && loss_.exponent() != 2.0) {
    throw std::invalid_argument("p-norm batch functional needs an explicit smoothness");
  } else {
    beta_ = loss_.ball_params(1.0).smoothness;
  }
  if (!(beta_ >= 0.0)) throw std::invalid_argument("smoothness must be non-negative");
}

double BatchFunctional::value(std::span<const double> f) const {
  if (f.size() != labels_.size()) throw std::invalid_argument("iterate size differs from batch");
  double total = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    total += loss_.evaluate(Prediction{labels_[j]}, Prediction{f[j]});
  }
  return total / static_cast<double>(f.size());
}

std::vector<double> BatchFunctional::derivatives(std::span<const double> f) const {
  if (f.size() != labels_.size()) throw std::invalid_argument("iterate size differs from batch");
  std::vector<double> d(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    d[j] = loss_.gradient(Prediction{labels_[j]}, Prediction{f[j]})[0];
  }
  return d;
}

double BatchFunctional::pairing(std::span<const double> f, std::span<const double> g) const {
  if (g.size() != f.size()) throw std::invalid_argument("pairing size mismatch");
  const auto d = derivatives(f);
  double s = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) s += d[j] * g[j];
  return s / static_cast<double>(g.size());
}

BatchIterate zero_iterate(const Dictionary& dict) {
  BatchIterate f;
  f.coefficients.assign(dict.size(), 0.0);
  f.values.assign(dict.points(), 0.0);
  return f;
}

std::size_t base_argmin(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                        double eta) {
  if (dict.size() == 0) throw std::invalid_argument("empty dictionary");
  std::vector<double> trial(f.values.size());
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t k = 0; k < dict.size(); ++k) {
    const auto g = dict.column(k);
    for (std::size_t j = 0; j < trial.size(); ++j) trial[j] = f.values[j] + eta * g[j];
    const double v = fun.value(trial);
    if (k == 0 || v < best_value) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

namespace {

BatchIterate shrunk_step(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                         double eta, int sigma) {
  const std::size_t k = base_argmin(fun, dict, f, eta);
  BatchIterate next = f;
  const double keep = 1.0 - sigma * eta;
  if (sigma != 0) {
    for (double& c : next.coefficients) c *= keep;
    for (double& v : next.values) v *= keep;
  }
  next.coefficients[k] += eta;
  const auto g = dict.column(k);
  for (std::size_t j = 0; j < next.values.size(); ++j) next.values[j] += eta * g[j];
  next.s = f.s + eta;
  next.stage = f.stage + 1;
  next.sigma = sigma;
  return next;
}

}  // namespace

BatchIterate zy_step(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                     double eta) {
  if (!(eta >= 0.0)) throw std::invalid_argument("step size must be non-negative");
  return shrunk_step(fun, dict, f, eta, 0);
}

BatchIterate gated_step(const BatchFunctional& fun, const Dictionary& dict, const BatchIterate& f,
                        double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("gated step size must lie in [0, 1]");
  const int sigma = fun.pairing(f.values, f.values) >= 0.0 ? 1 : 0;
  return shrunk_step(fun, dict, f, eta, sigma);
}

double zy_bound(double delta0, double l1, double beta, std::span<const double> steps, double s0) {
  std::vector<double> s(steps.size() + 1, s0);
  for (std::size_t i = 0; i < steps.size(); ++i) s[i + 1] = s[i] + steps[i];
  const double sn = s.back();
  double b = (s0 + l1) / (sn + l1) * delta0;
  for (std::size_t i = 1; i <= steps.size(); ++i) {
    const double eta = steps[i - 1];
    b += (s[i] + l1) / (sn + l1) * 0.5 * beta * eta * eta;
  }
  return b;
}

double gated_bound(double delta0, double l1, double beta, std::span<const double> steps,
                   double s0) {
  std::vector<double> s(steps.size() + 1, s0);
  for (std::size_t i = 0; i < steps.size(); ++i) s[i + 1] = s[i] + steps[i];
  const double sn = s.back();
  double b = std::exp(-(sn - s0) / l1) * delta0;
  for (std::size_t i = 1; i <= steps.size(); ++i) {
    const double eta = steps[i - 1];
    b += std::exp(-(sn - s[i]) / l1) * 0.5 * beta * eta * eta * (s[i] * s[i] + 1.0);
  }
  return b;
}

std::optional<std::size_t> BatchRun::first_below(double threshold) const {
  for (const auto& r : rows) {
    if (r.delta < threshold) return r.stage;
  }
  return std::nullopt;
}

BatchRun run_batch(const BatchFunctional& fun, const Dictionary& dict,
                   std::span<const double> comparator, double l1, std::span<const double> schedule,
                   BatchVariant variant) {
  if (!(l1 > 0.0)) throw std::invalid_argument("comparator norm must be positive");
  BatchRun run;
  run.variant = variant;
  run.comparator_loss = fun.value(comparator);
  BatchIterate f = zero_iterate(dict);
  const double delta0 = fun.value(f.values) - run.comparator_loss;
  run.rows.push_back({0, f.s, delta0, delta0, 0});
  const double beta = fun.smoothness();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    f = variant == BatchVariant::zy ? zy_step(fun, dict, f, schedule[i])
                                    : gated_step(fun, dict, f, schedule[i]);
    const auto steps = schedule.first(i + 1);
    const double bound = variant == BatchVariant::zy ? zy_bound(delta0, l1, beta, steps)
                                                     : gated_bound(delta0, l1, beta, steps);
    run.rows.push_back({f.stage, f.s, fun.value(f.values) - run.comparator_loss, bound, f.sigma});
  }
  return run;
}

PlantedBatchProblem make_planted_batch(std::size_t functions, std::size_t points, double l1,
                                       std::uint64_t seed) {
  if (functions == 0 || points == 0) throw std::invalid_argument("empty planted batch problem");
  if (!(l1 > 0.0)) throw std::invalid_argument("planted norm must be positive");
  Rng rng(seed);
  std::vector<std::vector<double>> base(functions, std::vector<double>(points));
  for (auto& c : base) {
    for (double& v : c) v = rng.normal();
    const double r = rms(c);
    for (double& v : c) v /= r;
    // Division can leave the RMS a rounding error above 1.
    while (rms(c) > 1.0) {
      for (double& v : c) v *= 1.0 - 0x1p-52;
    }
  }
  std::vector<double> w(functions);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());  // Exp(1): normalized, a flat Dirichlet draw
    total += x;
  }
  for (double& x : w) x = (rng.bernoulli(0.5) ? 1.0 : -1.0) * l1 * x / total;

  std::vector<double> target(points, 0.0);
  for (std::size_t k = 0; k < functions; ++k) {
    for (std::size_t j = 0; j < points; ++j) target[j] += w[k] * base[k][j];
  }
  Dictionary dict = Dictionary::symmetric_closure(base);
  BatchFunctional fun(LossClass::squared(), target);
  return {std::move(dict), std::move(fun), target, std::move(w), l1};
}

}  // namespace ogb
