#include "ogb/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ogb/random.hpp"

namespace ogb {

namespace {

PlantedStream planted(std::shared_ptr<const FunctionPool> pool, std::vector<double> coefficients,
                      double noise, std::size_t rounds, std::size_t input_dim, std::uint64_t seed,
                      LossClass loss) {
  if (!(noise >= 0.0)) throw std::invalid_argument("noise must be non-negative");
  if (rounds == 0 || input_dim == 0) throw std::invalid_argument("empty planted stream");
  ComparatorSpec comparator = ComparatorSpec::planted(std::move(pool), std::move(coefficients));
  Rng inputs(seed);
  Rng labels = inputs.split(1);
  std::vector<Example> examples;
  examples.reserve(rounds);
  std::vector<Feature> features(input_dim);
  for (std::size_t t = 0; t < rounds; ++t) {
    for (std::size_t j = 0; j < input_dim; ++j) {
      features[j] = {static_cast<FeatureId>(j + 1), inputs.uniform(-1.0, 1.0)};
    }
    Example x(features, std::nullopt, t);
    double y = comparator.evaluate(x)[0];
    if (noise > 0.0) y += noise * labels.normal();
    examples.push_back(x.with_label(Prediction{std::clamp(y, -1.0, 1.0)}));
  }
  return {Stream(std::move(examples), loss, "planted:" + std::to_string(seed)),
          std::move(comparator)};
}

}  // namespace

PlantedStream planted_span_stream(std::shared_ptr<const FunctionPool> pool,
                                  std::vector<double> coefficients, double noise,
                                  std::size_t rounds, std::size_t input_dim, std::uint64_t seed,
                                  LossClass loss) {
  return planted(std::move(pool), std::move(coefficients), noise, rounds, input_dim, seed, loss);
}

PlantedStream planted_hull_stream(std::shared_ptr<const FunctionPool> pool,
                                  std::vector<double> coefficients, double noise,
                                  std::size_t rounds, std::size_t input_dim, std::uint64_t seed,
                                  LossClass loss) {
  double sum = 0.0;
  for (double w : coefficients) {
    if (w < 0.0) throw std::invalid_argument("hull coefficients must be non-negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("hull coefficients must sum to 1");
  auto out = planted(std::move(pool), std::move(coefficients), noise, rounds, input_dim, seed, loss);
  out.comparator.kind = ComparatorKind::best_convex_hull;
  return out;
}

std::vector<double> random_simplex_weights(std::size_t size, std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("need at least one weight");
  Rng rng(seed);
  std::vector<double> w(size);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(1.0 - rng.uniform());
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::vector<double> random_span_weights(std::size_t size, double l1, std::uint64_t seed) {
  if (!(l1 > 0.0)) throw std::invalid_argument("l1 norm must be positive");
  auto w = random_simplex_weights(size, seed);
  Rng signs(seed ^ 0x9e3779b97f4a7c15ULL);
  for (double& x : w) x *= (signs.bernoulli(0.5) ? 1.0 : -1.0) * l1;
  return w;
}

double lower_bound_epsilon(std::size_t stages) {
  if (stages == 0) throw std::invalid_argument("stages must be positive");
  return 1.0 / (10.0 * std::sqrt(static_cast<double>(stages)));
}

std::size_t lower_bound_min_rounds(std::size_t stages, double c) {
  return 12 * lower_bound_pool_size(stages, c);
}

LowerBoundSetup make_lower_bound_stream(std::size_t stages, std::size_t rounds, std::uint64_t seed,
                                     double c) {
  const std::size_t m = lower_bound_pool_size(stages, c);
  const std::size_t min_rounds = 12 * m;
  if (rounds < min_rounds) {
    throw std::invalid_argument("lower-bound stream needs T >= 12M = " + std::to_string(min_rounds) +
                                " (M = " + std::to_string(m) + "), got T = " +
                                std::to_string(rounds));
  }
  const double eps = lower_bound_epsilon(stages);
  Rng rng(seed);
  auto labels = std::make_shared<std::vector<double>>(rounds);
  std::vector<Example> examples;
  examples.reserve(rounds);
  for (std::size_t t = 0; t < rounds; ++t) {
    (*labels)[t] = rng.bernoulli(0.5) ? 0.5 + eps : 0.5 - eps;
    examples.emplace_back(std::vector<Feature>{}, Prediction{(*labels)[t]}, t);
  }
  LowerBoundSetup setup;
  setup.stream = Stream(std::move(examples), LossClass::squared(), "lower-bound:" + std::to_string(seed));
  setup.pool = std::make_shared<LowerBoundPool>(m, splitmix64(seed ^ 0x1b0a5eedULL), labels);
  setup.labels = labels;
  setup.stages = stages;
  setup.epsilon = eps;
  setup.c = c;
  return setup;
}

Stream make_additive_stream(std::size_t rounds, std::uint64_t seed, std::size_t components,
                            std::size_t bins, double noise) {
  if (rounds == 0 || components == 0 || bins == 0) throw std::invalid_argument("empty additive stream");
  Rng shape(seed);
  // Each step function takes values in [-1, 1]; the sum is rescaled by 0.9 / components.
  std::vector<std::vector<double>> steps(components, std::vector<double>(bins));
  for (auto& h : steps) {
    for (double& v : h) v = shape.uniform(-1.0, 1.0);
  }
  const double scale = 0.9 / static_cast<double>(components);
  Rng inputs = shape.split(1);
  Rng noise_rng = shape.split(2);
  std::vector<Example> examples;
  examples.reserve(rounds);
  std::vector<Feature> features(components);
  for (std::size_t t = 0; t < rounds; ++t) {
    double y = 0.0;
    for (std::size_t k = 0; k < components; ++k) {
      const auto b = std::min(static_cast<std::size_t>(inputs.uniform() * static_cast<double>(bins)),
                              bins - 1);
      features[k] = {static_cast<FeatureId>(k * bins + b + 1), 1.0};
      y += scale * steps[k][b];
    }
    if (noise > 0.0) y += noise * noise_rng.normal();
    examples.emplace_back(features, Prediction{std::clamp(y, -1.0, 1.0)}, t);
  }
  return Stream(std::move(examples), LossClass::squared(), "additive:" + std::to_string(seed));
}

}  // namespace ogb
