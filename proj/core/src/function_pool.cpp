#include "ogb/function_pool.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ogb/random.hpp"

namespace ogb {

double FunctionPool::evaluate_one(const Example& x, std::size_t i) const {
  std::vector<double> all(size());
  evaluate(x, all);
  return all.at(i);
}

std::vector<double> FunctionPool::evaluate(const Example& x) const {
  std::vector<double> out(size());
  evaluate(x, out);
  return out;
}

ExplicitPool::ExplicitPool(std::vector<Function> functions, double bound)
    : functions_(std::move(functions)), bound_(bound) {
  if (functions_.empty()) throw std::invalid_argument("function pool must not be empty");
  if (!(bound > 0.0)) throw std::invalid_argument("pool bound must be positive");
}

void ExplicitPool::evaluate(const Example& x, std::span<double> out) const {
  for (std::size_t i = 0; i < functions_.size(); ++i) out[i] = evaluate_one(x, i);
}

double ExplicitPool::evaluate_one(const Example& x, std::size_t i) const {
  const double v = functions_.at(i)(x);
  if (!(std::abs(v) <= bound_ + 1e-12)) {
    throw std::domain_error("pool function " + std::to_string(i) + " left its bound");
  }
  return v;
}

RandomFeaturePool::RandomFeaturePool(std::size_t size, std::size_t input_dim, std::uint64_t seed,
                                     double bound)
    : input_dim_(input_dim), bound_(bound) {
  if (size == 0 || input_dim == 0) throw std::invalid_argument("empty random feature pool");
  if (!(bound > 0.0)) throw std::invalid_argument("pool bound must be positive");
  Rng rng(seed);
  const double scale = 2.0 / std::sqrt(static_cast<double>(input_dim));
  weights_.resize(size * input_dim);
  phases_.resize(size);
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t j = 0; j < input_dim; ++j) weights_[k * input_dim + j] = scale * rng.normal();
    phases_[k] = 2.0 * std::numbers::pi * rng.uniform();
  }
}

void RandomFeaturePool::evaluate(const Example& x, std::span<double> out) const {
  for (std::size_t k = 0; k < size(); ++k) out[k] = evaluate_one(x, k);
}

double RandomFeaturePool::evaluate_one(const Example& x, std::size_t k) const {
  double z = phases_.at(k);
  const double* w = weights_.data() + k * input_dim_;
  for (const Feature& f : x.features()) {
    if (f.id >= 1 && f.id <= input_dim_) z += w[f.id - 1] * f.value;
  }
  return bound_ * std::sin(z);
}

FeaturePool::FeaturePool(std::vector<FeatureId> ids, double bound)
    : ids_(std::move(ids)), bound_(bound) {
  if (ids_.empty()) throw std::invalid_argument("feature pool must not be empty");
  if (!(bound > 0.0)) throw std::invalid_argument("pool bound must be positive");
}

void FeaturePool::evaluate(const Example& x, std::span<double> out) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) out[i] = evaluate_one(x, i);
}

double FeaturePool::evaluate_one(const Example& x, std::size_t i) const {
  return std::clamp(x.value(ids_.at(i)), -bound_, bound_);
}

SymmetricPool::SymmetricPool(std::shared_ptr<const FunctionPool> inner) : inner_(std::move(inner)) {
  if (!inner_) throw std::invalid_argument("symmetric pool needs an inner pool");
}

void SymmetricPool::evaluate(const Example& x, std::span<double> out) const {
  const std::size_t k = inner_->size();
  inner_->evaluate(x, out.first(k));
  for (std::size_t i = 0; i < k; ++i) out[k + i] = -out[i];
  out[2 * k] = 0.0;
}

double SymmetricPool::evaluate_one(const Example& x, std::size_t i) const {
  const std::size_t k = inner_->size();
  if (i < k) return inner_->evaluate_one(x, i);
  if (i < 2 * k) return -inner_->evaluate_one(x, i - k);
  if (i == 2 * k) return 0.0;
  throw std::out_of_range("symmetric pool index");
}

LowerBoundPool::LowerBoundPool(std::size_t size, std::uint64_t seed,
                               std::shared_ptr<const std::vector<double>> labels)
    : size_(size), seed_(seed), labels_(std::move(labels)) {
  if (size_ == 0) throw std::invalid_argument("lower-bound pool must not be empty");
  if (!labels_) throw std::invalid_argument("lower-bound pool needs the label sequence");
}

double LowerBoundPool::label_at(const Example& x) const {
  const std::uint64_t t = x.index();
  if (t >= labels_->size()) throw std::out_of_range("example index beyond the label sequence");
  return (*labels_)[t];
}

void LowerBoundPool::evaluate(const Example& x, std::span<double> out) const {
  const double p = label_at(x);
  const std::uint64_t t = x.index();
  for (std::size_t i = 0; i < size_; ++i) {
    out[i] = to_unit_double(mix_keys(seed_, i, t)) < p ? 1.0 : 0.0;
  }
}

double LowerBoundPool::evaluate_one(const Example& x, std::size_t i) const {
  if (i >= size_) throw std::out_of_range("lower-bound pool index");
  return to_unit_double(mix_keys(seed_, i, x.index())) < label_at(x) ? 1.0 : 0.0;
}

double LowerBoundPool::mean(const Example& x) const {
  const double p = label_at(x);
  const std::uint64_t t = x.index();
  std::size_t ones = 0;
  for (std::size_t i = 0; i < size_; ++i) ones += to_unit_double(mix_keys(seed_, i, t)) < p;
  return static_cast<double>(ones) / static_cast<double>(size_);
}

std::size_t lower_bound_pool_size(std::size_t stages, double c) {
  if (stages == 0) throw std::invalid_argument("stages must be positive");
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("pool constant c must lie in (0, 1]");
  return static_cast<std::size_t>(std::llround(static_cast<double>(stages) / c));
}

std::shared_ptr<LowerBoundPool> make_lower_bound_pool(
    std::size_t stages, std::uint64_t seed, std::shared_ptr<const std::vector<double>> labels,
    double c) {
  return std::make_shared<LowerBoundPool>(lower_bound_pool_size(stages, c), seed,
                                          std::move(labels));
}

}  // namespace ogb
