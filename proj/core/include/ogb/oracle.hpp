#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ogb/function_pool.hpp"
#include "ogb/stream.hpp"

namespace ogb {

enum class ComparatorKind { zero, planted_span, best_single, best_convex_hull, uniform };

std::string to_string(ComparatorKind kind);

/// A fixed offline comparator f = sum_g w_g g over a pool (or f = 0).
struct ComparatorSpec {
  ComparatorKind kind = ComparatorKind::zero;
  std::shared_ptr<const FunctionPool> pool;
  std::vector<double> coefficients;
  double l1 = 1.0;  // W = max(1, sum |w_g|)

  static ComparatorSpec zero();
  static ComparatorSpec planted(std::shared_ptr<const FunctionPool> pool,
                                std::vector<double> coefficients);

  /// f(x) as a 1-d prediction.
  Prediction evaluate(const Example& x) const;
  double total_loss(const Stream& stream) const;
};

struct HullSolution {
  std::vector<double> weights;  // on the simplex
  double total_loss = 0.0;
  double gap = 0.0;  // final Frank-Wolfe duality gap
  std::size_t iterations = 0;
};

struct HullOptions {
  double gap_tolerance_per_round = 1e-6;  // stop once gap <= this * T
  std::size_t max_iterations = 200000;
};

/// Frank-Wolfe with away steps for min_{w in simplex} sum_t l_t(sum_g w_g g(x_t)).
///
/// Squared loss runs on the pool's Gram matrix with exact line search; other
/// losses evaluate every round per iteration and line-search by bisection on
/// the directional derivative. Pools above 64 functions are rejected.
HullSolution best_convex_hull(const Stream& stream, const FunctionPool& pool,
                              const HullOptions& options = {});

/// Accelerated projected gradient on the same problem, used as a cross-check.
HullSolution projected_gradient_hull(const Stream& stream, const FunctionPool& pool,
                                     std::size_t iterations = 5000);

/// The uniform average (1/M) sum_i f_i, for pools too large to optimize over.
HullSolution uniform_hull(const Stream& stream, const FunctionPool& pool);

struct SingleSolution {
  std::size_t index = 0;
  double total_loss = 0.0;
};

/// argmin_g sum_t l_t(g(x_t)); ties go to the lowest index.
SingleSolution best_single(const Stream& stream, const FunctionPool& pool);

/// sum_t l_t(0).
double zero_loss(const Stream& stream);

/// Comparator spec holding an oracle's weights.
ComparatorSpec hull_comparator(std::shared_ptr<const FunctionPool> pool, const HullSolution& s,
                               ComparatorKind kind = ComparatorKind::best_convex_hull);

}  // namespace ogb
