#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ogb/losses.hpp"
#include "ogb/random.hpp"

using namespace ogb;

namespace {

double value(const LossClass& l, double label, double y) {
  return l.evaluate(Prediction{label}, Prediction{y});
}
double grad(const LossClass& l, double label, double y) {
  return l.gradient(Prediction{label}, Prediction{y})[0];
}

}  // namespace

TEST(Loss, ValueExamples) {
  EXPECT_NEAR(value(LossClass::logistic(), 1, 0), std::log(2.0), 1e-15);
  EXPECT_EQ(value(LossClass::p_norm(2), 1, 0), 1.0);
  EXPECT_EQ(value(LossClass::modified_least_squares(), 1, 2), 0.0);
  EXPECT_NEAR(value(LossClass::squared(), 0.5, 0.7), 0.02, 1e-15);
  EXPECT_EQ(value(LossClass::linear(), 1, 3), -3.0);
}

TEST(Loss, GradientExamples) {
  EXPECT_NEAR(grad(LossClass::squared(), 0.5, 0.7), 0.2, 1e-15);
  EXPECT_EQ(grad(LossClass::linear(), 1, 5), -1.0);
  EXPECT_EQ(grad(LossClass::linear(), 1, -5), -1.0);
  EXPECT_NEAR(grad(LossClass::logistic(), 1, 0), -0.5, 1e-15);
}

TEST(Loss, LogisticIsStableForLargeMargins) {
  const auto l = LossClass::logistic();
  EXPECT_NEAR(value(l, 1, -800), 800.0, 1e-9);
  EXPECT_EQ(value(l, 1, 800), 0.0);
  EXPECT_NEAR(grad(l, 1, -800), -1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(grad(l, -1, 800)));
}

TEST(Loss, PNormVector) {
  const auto l = LossClass::p_norm(3);
  const Prediction label{1.0, 0.0}, y{0.0, 2.0};
  const double n = std::sqrt(5.0);
  EXPECT_NEAR(l.evaluate(label, y), n * n * n, 1e-12);
  const Prediction g = l.gradient(label, y);
  EXPECT_NEAR(g[0], 3 * n * -1.0, 1e-12);
  EXPECT_NEAR(g[1], 3 * n * 2.0, 1e-12);
}

TEST(Loss, ParseRoundTrip) {
  for (const char* name : {"linear", "squared", "logistic", "mls", "p-norm:3"}) {
    EXPECT_EQ(LossClass::parse(name).name(), name);
  }
  EXPECT_EQ(LossClass::parse("p-norm:2.5").exponent(), 2.5);
  EXPECT_THROW(LossClass::parse("hinge"), std::invalid_argument);
  EXPECT_THROW(LossClass::parse("p-norm:1.5"), std::invalid_argument);
  EXPECT_THROW(LossClass::parse("p-norm:x"), std::invalid_argument);
  EXPECT_THROW(LossClass::p_norm(1.0), std::invalid_argument);
}

TEST(BallParams, PublishedValues) {
  const BallParams p = LossClass::p_norm(2).ball_params(1.0);
  EXPECT_EQ(p.lipschitz, 4.0);
  EXPECT_EQ(p.smoothness, 2.0);
  EXPECT_EQ(p.projection_penalty, 0.0);

  const BallParams m = LossClass::modified_least_squares().ball_params(0.5);
  EXPECT_EQ(m.lipschitz, 1.5);
  EXPECT_EQ(m.smoothness, 1.0);
  EXPECT_EQ(m.projection_penalty, 0.5);

  for (double b : {0.1, 1.0, 10.0}) {
    const BallParams l = LossClass::linear().ball_params(b);
    EXPECT_EQ(l.lipschitz, 1.0);
    EXPECT_EQ(l.smoothness, 0.0);
    EXPECT_EQ(l.projection_penalty, 1.0);
  }

  const BallParams g = LossClass::logistic().ball_params(2.0);
  EXPECT_NEAR(g.lipschitz, std::exp(2.0) / (1 + std::exp(2.0)), 1e-15);
  EXPECT_EQ(g.smoothness, 0.25);
  EXPECT_NEAR(g.projection_penalty, std::exp(-2.0) / (1 + std::exp(-2.0)), 1e-15);

  const BallParams s = LossClass::squared().ball_params(0.25);
  EXPECT_EQ(s.lipschitz, 1.25);
  EXPECT_EQ(s.smoothness, 1.0);
  EXPECT_EQ(s.projection_penalty, 0.75);

  EXPECT_THROW(LossClass::squared().ball_params(0.0), std::invalid_argument);
}

TEST(BallParams, LogisticHugeRadiusStaysFinite) {
  const BallParams g = LossClass::logistic().ball_params(1e6);
  EXPECT_EQ(g.lipschitz, 1.0);
  EXPECT_EQ(g.projection_penalty, 0.0);
}

// Finite differences, smoothness and Lipschitz inequalities on random probes.
class LossProperties : public ::testing::TestWithParam<const char*> {};

TEST_P(LossProperties, CalculusHolds) {
  const LossClass loss = LossClass::parse(GetParam());
  const bool margin = loss.family() == LossFamily::modified_least_squares ||
                      loss.family() == LossFamily::logistic;
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const double label = margin ? (rng.bernoulli(0.5) ? 1.0 : -1.0) : rng.uniform(-1, 1);
    const double b = rng.uniform(0.2, 4.0);
    const BallParams bp = loss.ball_params(b);
    const double y = rng.uniform(-4, 4);
    const double fd = (value(loss, label, y + 1e-6) - value(loss, label, y - 1e-6)) / 2e-6;
    EXPECT_NEAR(fd, grad(loss, label, y), 1e-5);

    const double u = rng.uniform(-b, b), v = rng.uniform(-b, b);
    EXPECT_LE(value(loss, label, v),
              value(loss, label, u) + grad(loss, label, u) * (v - u) +
                  0.5 * bp.smoothness * (v - u) * (v - u) + 1e-9);
    EXPECT_LE(std::abs(grad(loss, label, u)), bp.lipschitz + 1e-9);

    const double out = (rng.bernoulli(0.5) ? 1 : -1) * (b + rng.uniform(1e-3, 3));
    const double p = out > 0 ? b : -b;
    EXPECT_LE(value(loss, label, p) - value(loss, label, out),
              bp.projection_penalty * std::abs(p - out) + 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(Families, LossProperties,
                         ::testing::Values("linear", "p-norm:2", "p-norm:3", "mls", "logistic",
                                           "squared"));

TEST(Step, ValidationAndDefault) {
  EXPECT_NO_THROW(validate_step(0.1, 10));
  EXPECT_NO_THROW(validate_step(1.0, 10));
  EXPECT_THROW(validate_step(0.05, 10), std::invalid_argument);
  EXPECT_THROW(validate_step(1.5, 10), std::invalid_argument);
  EXPECT_THROW(validate_step(0.5, 0), std::invalid_argument);
  EXPECT_NEAR(default_step(16), std::log(16.0) / 16.0, 1e-15);
  EXPECT_EQ(default_step(1), 1.0);
  EXPECT_EQ(default_step(2), 0.5);  // ln 2 / 2 < 1/2, clamped up
}

TEST(Radius, PublishedClosedForms) {
  EXPECT_NEAR(solve_radius(LossClass::logistic(), 0.1, 100, 1.0), std::log(40.0), 1e-12);
  EXPECT_EQ(solve_radius(LossClass::linear(), 0.5, 10, 1.0), 5.0);
  EXPECT_EQ(solve_radius(LossClass::modified_least_squares(), 0.2, 20, 1.0), 1.0);
  EXPECT_EQ(solve_radius(LossClass::p_norm(3), 0.2, 20, 1.0), 1.0);
}

TEST(Radius, BisectionAgreesWithClosedForms) {
  for (const char* name : {"linear", "p-norm:2", "p-norm:4", "mls"}) {
    const LossClass loss = LossClass::parse(name);
    for (std::size_t n : {5u, 20u, 100u}) {
      for (double step : {1.0 / n, 0.3, 1.0}) {
        EXPECT_NEAR(*closed_form_radius(loss, step, n, 1.0),
                    radius_by_bisection(loss, step, n, 1.0), 1e-6)
            << name << " step " << step << " N " << n;
      }
    }
  }
}

TEST(Radius, BisectionFindsTheInfimum) {
  // Squared loss, D = 1, step 0.1: eps_b = 0 for b >= 1 so the infimum is D.
  EXPECT_NEAR(radius_by_bisection(LossClass::squared(), 0.1, 50, 1.0), 1.0, 1e-9);
  // Logistic, D = 1: the root of step/4 b^2 = sigmoid(-b) is feasible and minimal.
  const double b = radius_by_bisection(LossClass::logistic(), 0.1, 100, 1.0);
  EXPECT_NEAR(0.1 * 0.25 * b * b, 1.0 / (1.0 + std::exp(b)), 1e-8);
  EXPECT_LE(b, std::log(40.0));
  // Linear losses never satisfy the inequality: fall back to step * N * D.
  EXPECT_NEAR(radius_by_bisection(LossClass::linear(), 0.2, 10, 3.0), 6.0, 1e-12);
}

TEST(Radius, NoClosedFormOffUnitBound) {
  EXPECT_FALSE(closed_form_radius(LossClass::logistic(), 0.1, 100, 2.0));
  EXPECT_FALSE(closed_form_radius(LossClass::squared(), 0.1, 100, 1.0));
  EXPECT_TRUE(closed_form_radius(LossClass::linear(), 0.1, 100, 2.0));
  EXPECT_THROW(solve_radius(LossClass::squared(), 0.001, 100, 1.0), std::invalid_argument);
}
