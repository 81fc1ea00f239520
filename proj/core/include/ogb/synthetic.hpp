#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "ogb/function_pool.hpp"
#include "ogb/oracle.hpp"
#include "ogb/stream.hpp"

namespace ogb {

struct PlantedStream {
  Stream stream;
  ComparatorSpec comparator;
};

/// Inputs x_t uniform on [-1, 1]^input_dim (feature ids 1..input_dim), labels
/// sum_g w_g g(x_t) + N(0, noise^2) clipped to [-1, 1]. Clipping keeps the
/// loss constants valid at the price of a small bias when |f| nears 1.
PlantedStream planted_span_stream(std::shared_ptr<const FunctionPool> pool,
                                  std::vector<double> coefficients, double noise,
                                  std::size_t rounds, std::size_t input_dim, std::uint64_t seed,
                                  LossClass loss = LossClass::squared());

/// As planted_span_stream, with coefficients required to lie on the simplex.
PlantedStream planted_hull_stream(std::shared_ptr<const FunctionPool> pool,
                                  std::vector<double> coefficients, double noise,
                                  std::size_t rounds, std::size_t input_dim, std::uint64_t seed,
                                  LossClass loss = LossClass::squared());

/// Random simplex weights (flat Dirichlet) over `size` functions.
std::vector<double> random_simplex_weights(std::size_t size, std::uint64_t seed);

/// Random span weights with sum |w| = l1 exactly and random signs.
std::vector<double> random_span_weights(std::size_t size, double l1, std::uint64_t seed);

/// The lower-bound construction: x_t = t, y*_t drawn uniformly from
/// {1/2 + e, 1/2 - e} with e = 1 / (10 sqrt(N)), squared loss, and the
/// Bernoulli pool of M = N / c functions.
struct LowerBoundSetup {
  Stream stream;
  std::shared_ptr<const LowerBoundPool> pool;
  std::shared_ptr<const std::vector<double>> labels;
  std::size_t stages = 0;
  double epsilon = 0.0;
  double c = 0.0;
};

double lower_bound_epsilon(std::size_t stages);

/// Minimum horizon 12 M for the lower-bound stream.
std::size_t lower_bound_min_rounds(std::size_t stages, double c);

/// Throws std::invalid_argument naming the 12M threshold when rounds < 12 M.
LowerBoundSetup make_lower_bound_stream(std::size_t stages, std::size_t rounds, std::uint64_t seed,
                                     double c = 1.0 / 4000.0);

/// Additive regression target over one-hot binned inputs.
///
/// `components` inputs u_k ~ U[0, 1) are each cut into `bins` equal bins; the
/// example has feature id k * bins + b + 1 set to 1 for the bin b of u_k. The
/// label is sum_k h_k(b_k) + N(0, noise^2), clipped to [-1, 1], with each h_k a
/// random step function scaled so the sum stays within [-0.9, 0.9].
Stream make_additive_stream(std::size_t rounds, std::uint64_t seed, std::size_t components = 5,
                            std::size_t bins = 8, double noise = 0.1);

}  // namespace ogb
