#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ogb/core.hpp"

namespace ogb {

/// A finite list of scalar functions f_i : X -> [-bound, bound].
class FunctionPool {
 public:
  virtual ~FunctionPool() = default;

  virtual std::size_t size() const = 0;
  virtual double bound() const = 0;
  /// Writes f_0(x) .. f_{size-1}(x) into `out` (which must have size() slots).
  virtual void evaluate(const Example& x, std::span<double> out) const = 0;
  virtual double evaluate_one(const Example& x, std::size_t i) const;

  std::vector<double> evaluate(const Example& x) const;
};

/// Pool built from callables; each output is checked against the bound.
class ExplicitPool final : public FunctionPool {
 public:
  using Function = std::function<double(const Example&)>;

  ExplicitPool(std::vector<Function> functions, double bound);

  std::size_t size() const override { return functions_.size(); }
  double bound() const override { return bound_; }
  using FunctionPool::evaluate;
  void evaluate(const Example& x, std::span<double> out) const override;
  double evaluate_one(const Example& x, std::size_t i) const override;

 private:
  std::vector<Function> functions_;
  double bound_;
};

/// f_k(x) = bound * sin(w_k . x + phi_k) over features 1..input_dim, with
/// w_k ~ N(0, 4/input_dim) and phi_k ~ U[0, 2pi) drawn from the seed.
class RandomFeaturePool final : public FunctionPool {
 public:
  RandomFeaturePool(std::size_t size, std::size_t input_dim, std::uint64_t seed, double bound = 1.0);

  std::size_t size() const override { return phases_.size(); }
  double bound() const override { return bound_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  using FunctionPool::evaluate;
  void evaluate(const Example& x, std::span<double> out) const override;
  double evaluate_one(const Example& x, std::size_t i) const override;

 private:
  std::size_t input_dim_;
  double bound_;
  std::vector<double> weights_;  // size() x input_dim, row-major
  std::vector<double> phases_;
};

/// f_j(x) = clamp(x_j, -bound, bound) for a fixed list of feature ids.
class FeaturePool final : public FunctionPool {
 public:
  FeaturePool(std::vector<FeatureId> ids, double bound = 1.0);

  std::size_t size() const override { return ids_.size(); }
  double bound() const override { return bound_; }
  using FunctionPool::evaluate;
  void evaluate(const Example& x, std::span<double> out) const override;
  double evaluate_one(const Example& x, std::size_t i) const override;

 private:
  std::vector<FeatureId> ids_;
  double bound_;
};

/// Closure of a pool under negation plus the zero function:
/// indices [0, K) are f_k, [K, 2K) are -f_k and 2K is 0.
class SymmetricPool final : public FunctionPool {
 public:
  explicit SymmetricPool(std::shared_ptr<const FunctionPool> inner);

  std::size_t size() const override { return 2 * inner_->size() + 1; }
  double bound() const override { return inner_->bound(); }
  using FunctionPool::evaluate;
  void evaluate(const Example& x, std::span<double> out) const override;
  double evaluate_one(const Example& x, std::size_t i) const override;

  const FunctionPool& inner() const noexcept { return *inner_; }

 private:
  std::shared_ptr<const FunctionPool> inner_;
};

/// The Bernoulli pool of the lower-bound construction.
///
/// f_i(x_t) = 1 with probability y*_t and 0 otherwise, independently across
/// (i, t). Draws are a pure function of splitmix-hashing (seed, i, t), so a
/// repeated query for the same (function, example) always agrees, whichever
/// booster stage asks. `labels[t]` is the hidden label of the example with
/// index t.
class LowerBoundPool final : public FunctionPool {
 public:
  LowerBoundPool(std::size_t size, std::uint64_t seed,
                 std::shared_ptr<const std::vector<double>> labels);

  std::size_t size() const override { return size_; }
  double bound() const override { return 1.0; }
  using FunctionPool::evaluate;
  void evaluate(const Example& x, std::span<double> out) const override;
  double evaluate_one(const Example& x, std::size_t i) const override;

  /// The uniform average (1/M) sum_i f_i(x).
  double mean(const Example& x) const;

 private:
  double label_at(const Example& x) const;

  std::size_t size_;
  std::uint64_t seed_;
  std::shared_ptr<const std::vector<double>> labels_;
};

/// Pool size M = stages / c, rounded to the nearest integer (c = 1/4000 in the
/// original construction).
std::size_t lower_bound_pool_size(std::size_t stages, double c);

std::shared_ptr<LowerBoundPool> make_lower_bound_pool(
    std::size_t stages, std::uint64_t seed, std::shared_ptr<const std::vector<double>> labels,
    double c = 1.0 / 4000.0);

}  // namespace ogb
