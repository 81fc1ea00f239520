#include "ogb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ogb {

std::string to_string(ComparatorKind kind) {
  switch (kind) {
    case ComparatorKind::zero: return "zero";
    case ComparatorKind::planted_span: return "planted_span";
    case ComparatorKind::best_single: return "best_single";
    case ComparatorKind::best_convex_hull: return "best_convex_hull";
    case ComparatorKind::uniform: return "uniform";
  }
  return "unknown";
}

ComparatorSpec ComparatorSpec::zero() { return {}; }

ComparatorSpec ComparatorSpec::planted(std::shared_ptr<const FunctionPool> pool,
                                       std::vector<double> coefficients) {
  if (!pool) throw std::invalid_argument("planted comparator needs a pool");
  if (coefficients.size() != pool->size()) {
    throw std::invalid_argument("planted coefficients do not match the pool size");
  }
  double l1 = 0.0;
  for (double w : coefficients) {
    if (!std::isfinite(w)) throw std::invalid_argument("planted coefficient is not finite");
    l1 += std::abs(w);
  }
  ComparatorSpec spec;
  spec.kind = ComparatorKind::planted_span;
  spec.pool = std::move(pool);
  spec.coefficients = std::move(coefficients);
  spec.l1 = std::max(1.0, l1);
  return spec;
}

Prediction ComparatorSpec::evaluate(const Example& x) const {
  if (kind == ComparatorKind::zero) return Prediction{0.0};
  if (!pool) throw std::logic_error("comparator has no pool");
  const auto v = pool->evaluate(x);
  double y = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) y += coefficients[i] * v[i];
  return Prediction{y};
}

double ComparatorSpec::total_loss(const Stream& stream) const {
  double total = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) total += stream.loss_at(t).evaluate(evaluate(stream[t]));
  return total;
}

namespace {

constexpr std::size_t kMaxHullPool = 64;

struct Design {
  std::size_t rounds = 0;
  std::size_t arms = 0;
  std::vector<double> values;  // rounds x arms
  std::vector<double> labels;

  double at(std::size_t t, std::size_t k) const { return values[t * arms + k]; }
};

Design build_design(const Stream& stream, const FunctionPool& pool) {
  if (stream.empty()) throw std::invalid_argument("oracle needs a non-empty stream");
  Design d;
  d.rounds = stream.size();
  d.arms = pool.size();
  d.values.resize(d.rounds * d.arms);
  d.labels.resize(d.rounds);
  for (std::size_t t = 0; t < d.rounds; ++t) {
    const auto& label = *stream[t].label();
    if (label.dim() != 1) throw std::invalid_argument("oracles support scalar labels only");
    d.labels[t] = label[0];
    pool.evaluate(stream[t], std::span<double>(d.values).subspan(t * d.arms, d.arms));
  }
  return d;
}

std::vector<double> predictions(const Design& d, const std::vector<double>& w) {
  std::vector<double> z(d.rounds, 0.0);
  for (std::size_t t = 0; t < d.rounds; ++t) {
    const double* row = d.values.data() + t * d.arms;
    double s = 0.0;
    for (std::size_t k = 0; k < d.arms; ++k) s += row[k] * w[k];
    z[t] = s;
  }
  return z;
}

double total(const LossClass& loss, const Design& d, const std::vector<double>& z) {
  double s = 0.0;
  for (std::size_t t = 0; t < d.rounds; ++t) s += loss.evaluate(Prediction{d.labels[t]}, Prediction{z[t]});
  return s;
}

double derivative(const LossClass& loss, double label, double z) {
  return loss.gradient(Prediction{label}, Prediction{z})[0];
}

std::vector<double> gradient(const LossClass& loss, const Design& d, const std::vector<double>& z) {
  std::vector<double> g(d.arms, 0.0);
  for (std::size_t t = 0; t < d.rounds; ++t) {
    const double r = derivative(loss, d.labels[t], z[t]);
    if (r == 0.0) continue;
    const double* row = d.values.data() + t * d.arms;
    for (std::size_t k = 0; k < d.arms; ++k) g[k] += r * row[k];
  }
  return g;
}

struct Gram {
  std::vector<double> g;  // arms x arms
  std::vector<double> c;  // F^T y
  std::size_t arms = 0;
};

Gram build_gram(const Design& d) {
  Gram gram;
  gram.arms = d.arms;
  gram.g.assign(d.arms * d.arms, 0.0);
  gram.c.assign(d.arms, 0.0);
  for (std::size_t t = 0; t < d.rounds; ++t) {
    const double* row = d.values.data() + t * d.arms;
    for (std::size_t i = 0; i < d.arms; ++i) {
      gram.c[i] += row[i] * d.labels[t];
      for (std::size_t j = i; j < d.arms; ++j) gram.g[i * d.arms + j] += row[i] * row[j];
    }
  }
  for (std::size_t i = 0; i < d.arms; ++i) {
    for (std::size_t j = 0; j < i; ++j) gram.g[i * d.arms + j] = gram.g[j * d.arms + i];
  }
  return gram;
}

std::vector<double> gram_times(const Gram& gram, const std::vector<double>& v) {
  std::vector<double> out(gram.arms, 0.0);
  for (std::size_t i = 0; i < gram.arms; ++i) {
    for (std::size_t j = 0; j < gram.arms; ++j) out[i] += gram.g[i * gram.arms + j] * v[j];
  }
  return out;
}

double largest_eigenvalue(const Gram& gram) {
  std::vector<double> v(gram.arms, 1.0 / std::sqrt(static_cast<double>(gram.arms)));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    auto w = gram_times(gram, v);
    const double n = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (n == 0.0) return 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / n;
    if (std::abs(n - lambda) <= 1e-12 * n) return n;
    lambda = n;
  }
  return lambda;
}

std::vector<double> project_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
  return v;
}

void check_pool(const FunctionPool& pool) {
  if (pool.size() > kMaxHullPool) {
    throw std::invalid_argument("convex-hull oracle supports at most 64 functions, pool has " +
                                std::to_string(pool.size()) + "; use the uniform comparator");
  }
}

}  // namespace

HullSolution best_convex_hull(const Stream& stream, const FunctionPool& pool,
                              const HullOptions& options) {
  check_pool(pool);
  const LossClass& loss = stream.loss();
  const Design d = build_design(stream, pool);
  const bool squared = loss.family() == LossFamily::squared;
  const Gram gram = squared ? build_gram(d) : Gram{};
  const double tolerance = options.gap_tolerance_per_round * static_cast<double>(d.rounds);

  // Start from the best vertex.
  const SingleSolution start = best_single(stream, pool);
  std::vector<double> w(d.arms, 0.0);
  w[start.index] = 1.0;
  std::vector<double> z = squared ? std::vector<double>{} : predictions(d, w);

  HullSolution out;
  for (out.iterations = 0; out.iterations < options.max_iterations; ++out.iterations) {
    std::vector<double> grad;
    if (squared) {
      grad = gram_times(gram, w);
      for (std::size_t k = 0; k < d.arms; ++k) grad[k] -= gram.c[k];
    } else {
      grad = gradient(loss, d, z);
    }
    const double gw = std::inner_product(grad.begin(), grad.end(), w.begin(), 0.0);
    const auto s = static_cast<std::size_t>(std::min_element(grad.begin(), grad.end()) - grad.begin());
    // Away vertex: the worst active coordinate.
    std::size_t a = d.arms;
    for (std::size_t k = 0; k < d.arms; ++k) {
      if (w[k] > 0.0 && (a == d.arms || grad[k] > grad[a])) a = k;
    }
    const double fw_gap = gw - grad[s];
    out.gap = fw_gap;
    if (fw_gap <= tolerance) break;
    const double away_gap = grad[a] - gw;

    std::vector<double> dir(d.arms);
    double gamma_max = 1.0;
    if (fw_gap >= away_gap || w[a] >= 1.0) {
      for (std::size_t k = 0; k < d.arms; ++k) dir[k] = -w[k];
      dir[s] += 1.0;
    } else {
      for (std::size_t k = 0; k < d.arms; ++k) dir[k] = w[k];
      dir[a] -= 1.0;
      gamma_max = w[a] / (1.0 - w[a]);
    }

    double gamma = gamma_max;
    const double slope = std::inner_product(grad.begin(), grad.end(), dir.begin(), 0.0);
    if (squared) {
      const auto gd = gram_times(gram, dir);
      const double curvature = std::inner_product(dir.begin(), dir.end(), gd.begin(), 0.0);
      if (curvature > 0.0) gamma = std::clamp(-slope / curvature, 0.0, gamma_max);
    } else {
      const auto u = predictions(d, dir);
      auto dphi = [&](double g) {
        double s2 = 0.0;
        for (std::size_t t = 0; t < d.rounds; ++t) {
          if (u[t] != 0.0) s2 += derivative(loss, d.labels[t], z[t] + g * u[t]) * u[t];
        }
        return s2;
      };
      if (dphi(gamma_max) > 0.0) {
        double lo = 0.0, hi = gamma_max;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          (dphi(mid) > 0.0 ? hi : lo) = mid;
        }
        gamma = 0.5 * (lo + hi);
      }
      for (std::size_t t = 0; t < d.rounds; ++t) z[t] += gamma * u[t];
    }
    if (gamma == 0.0) break;
    for (std::size_t k = 0; k < d.arms; ++k) {
      w[k] += gamma * dir[k];
      if (w[k] < 1e-15) w[k] = 0.0;
    }
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
    if (!squared && out.iterations % 64 == 63) z = predictions(d, w);
  }
  out.weights = w;
  out.total_loss = total(loss, d, predictions(d, w));
  return out;
}

HullSolution projected_gradient_hull(const Stream& stream, const FunctionPool& pool,
                                     std::size_t iterations) {
  check_pool(pool);
  const LossClass& loss = stream.loss();
  const Design d = build_design(stream, pool);
  const Gram gram = build_gram(d);
  const bool squared = loss.family() == LossFamily::squared;
  const double radius = std::max(pool.bound(), 1.0);
  const double beta = loss.ball_params(radius).smoothness;
  const double lipschitz = beta * largest_eigenvalue(gram);
  HullSolution out;
  out.weights.assign(d.arms, 1.0 / static_cast<double>(d.arms));
  if (lipschitz <= 0.0) {
    out.total_loss = total(loss, d, predictions(d, out.weights));
    return out;
  }
  const double step = 1.0 / lipschitz;

  std::vector<double> x = out.weights, y = x;
  double momentum = 1.0;
  for (out.iterations = 0; out.iterations < iterations; ++out.iterations) {
    std::vector<double> grad;
    if (squared) {
      grad = gram_times(gram, y);
      for (std::size_t k = 0; k < d.arms; ++k) grad[k] -= gram.c[k];
    } else {
      grad = gradient(loss, d, predictions(d, y));
    }
    std::vector<double> next(d.arms);
    for (std::size_t k = 0; k < d.arms; ++k) next[k] = y[k] - step * grad[k];
    next = project_simplex(std::move(next));
    const double m_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    for (std::size_t k = 0; k < d.arms; ++k) {
      y[k] = next[k] + (momentum - 1.0) / m_next * (next[k] - x[k]);
    }
    double change = 0.0;
    for (std::size_t k = 0; k < d.arms; ++k) change = std::max(change, std::abs(next[k] - x[k]));
    x = std::move(next);
    momentum = m_next;
    if (change < 1e-13) break;
  }
  out.weights = x;
  out.total_loss = total(loss, d, predictions(d, x));
  return out;
}

HullSolution uniform_hull(const Stream& stream, const FunctionPool& pool) {
  HullSolution out;
  const double m = static_cast<double>(pool.size());
  out.weights.assign(pool.size(), 1.0 / m);
  std::vector<double> v(pool.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    pool.evaluate(stream[t], v);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / m;
    out.total_loss += stream.loss_at(t).evaluate(Prediction{mean});
  }
  return out;
}

SingleSolution best_single(const Stream& stream, const FunctionPool& pool) {
  std::vector<double> totals(pool.size(), 0.0);
  std::vector<double> v(pool.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    pool.evaluate(stream[t], v);
    const LossInstance loss = stream.loss_at(t);
    for (std::size_t k = 0; k < v.size(); ++k) totals[k] += loss.evaluate(Prediction{v[k]});
  }
  SingleSolution best{0, totals.front()};
  for (std::size_t k = 1; k < totals.size(); ++k) {
    if (totals[k] < best.total_loss) best = {k, totals[k]};
  }
  return best;
}

double zero_loss(const Stream& stream) {
  double s = 0.0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    s += stream.loss_at(t).evaluate(Prediction::zeros(stream[t].label()->dim()));
  }
  return s;
}

ComparatorSpec hull_comparator(std::shared_ptr<const FunctionPool> pool, const HullSolution& s,
                               ComparatorKind kind) {
  ComparatorSpec spec = ComparatorSpec::planted(std::move(pool), s.weights);
  spec.kind = kind;
  return spec;
}

}  // namespace ogb
