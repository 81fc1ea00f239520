#include <cmath>
#include <memory>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ogb/function_pool.hpp"
#include "ogb/greedy.hpp"
#include "ogb/hedge_learner.hpp"
#include "ogb/ogd_learner.hpp"
#include "ogb/random.hpp"
#include "ogb/scaled_learner.hpp"
#include "ogb/stump_learner.hpp"
#include "ogb/symmetrized_learner.hpp"
#include "support.hpp"

using namespace ogb;
using ogb::test::ConstantLearner;

namespace {

LinearFeedback fb(double g) { return LinearFeedback{Prediction{g}}; }

std::shared_ptr<ExplicitPool> constant_pool(std::vector<double> values) {
  std::vector<ExplicitPool::Function> fs;
  for (double v : values) fs.push_back([v](const Example&) { return v; });
  return std::make_shared<ExplicitPool>(std::move(fs), 1.0);
}

}  // namespace

// --- pools ------------------------------------------------------------------

TEST(Pool, ExplicitChecksBound) {
  auto pool = constant_pool({0.5, 2.0});
  std::vector<double> out(2);
  EXPECT_THROW(pool->evaluate(Example{}, out), std::domain_error);
  EXPECT_THROW(ExplicitPool({}, 1.0), std::invalid_argument);
}

TEST(Pool, RandomFeaturesAreBoundedAndDeterministic) {
  RandomFeaturePool a(6, 3, 11), b(6, 3, 11), c(6, 3, 12);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Example x({{1, rng.uniform(-1, 1)}, {2, rng.uniform(-1, 1)}, {3, rng.uniform(-1, 1)}});
    const auto va = a.evaluate(x);
    EXPECT_EQ(va, b.evaluate(x));
    for (std::size_t k = 0; k < va.size(); ++k) {
      EXPECT_LE(std::abs(va[k]), 1.0);
      EXPECT_EQ(va[k], a.evaluate_one(x, k));
    }
    EXPECT_NE(va, c.evaluate(x));
  }
}

TEST(Pool, FeaturePoolClamps) {
  FeaturePool pool({1, 2}, 1.0);
  const auto v = pool.evaluate(Example({{1, 3.0}, {2, -0.5}}));
  EXPECT_EQ(v[0], 1.0);
  EXPECT_EQ(v[1], -0.5);
}

TEST(Pool, SymmetricLayout) {
  auto inner = constant_pool({0.25, -0.5});
  SymmetricPool pool(inner);
  ASSERT_EQ(pool.size(), 5u);
  EXPECT_EQ(pool.evaluate(Example{}), (std::vector<double>{0.25, -0.5, -0.25, 0.5, 0.0}));
}

TEST(Pool, LowerBoundDegenerateLabels) {
  auto labels = std::make_shared<std::vector<double>>(std::vector<double>{1.0, 0.0});
  LowerBoundPool pool(500, 7, labels);
  const Example one({}, std::nullopt, 0), zero({}, std::nullopt, 1);
  for (double v : pool.evaluate(one)) EXPECT_EQ(v, 1.0);
  for (double v : pool.evaluate(zero)) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(pool.evaluate(Example({}, std::nullopt, 2)), std::out_of_range);
}

TEST(Pool, LowerBoundBinomialConcentration) {
  // Binomial(4000, 0.55): sd = sqrt(0.55 * 0.45 / 4000) ~ 0.00787, so +-0.03 is
  // about 3.8 sd and fails with probability ~1.4e-4 per draw.
  auto labels = std::make_shared<std::vector<double>>(20, 0.55);
  auto pool = make_lower_bound_pool(1, 99, labels);
  ASSERT_EQ(pool->size(), 4000u);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Example x({}, std::nullopt, t);
    const auto v = pool->evaluate(x);
    double mean = 0.0;
    for (double b : v) mean += b;
    mean /= static_cast<double>(v.size());
    EXPECT_NEAR(mean, 0.55, 0.03);
    EXPECT_DOUBLE_EQ(mean, pool->mean(x));
  }
}

TEST(Pool, LowerBoundIsMemoized) {
  auto labels = std::make_shared<std::vector<double>>(50, 0.5);
  LowerBoundPool pool(64, 3, labels);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const Example x({}, std::nullopt, t);
    const auto first = pool.evaluate(x);
    for (std::size_t i = 0; i < 64; ++i) EXPECT_EQ(pool.evaluate_one(x, i), first[i]);
    EXPECT_EQ(pool.evaluate(x), first);
  }
}

TEST(Pool, LowerBoundSize) {
  EXPECT_EQ(lower_bound_pool_size(4, 1.0 / 4000.0), 16000u);
  EXPECT_EQ(lower_bound_pool_size(8, 1.0 / 50.0), 400u);
  EXPECT_THROW(lower_bound_pool_size(4, 0.0), std::invalid_argument);
  EXPECT_THROW(lower_bound_pool_size(4, 1.5), std::invalid_argument);
}

// --- feedback contract --------------------------------------------------------

TEST(Learner, RejectsOversizedFeedback) {
  OgdLearner ogd;
  const Example x({{1, 1.0}});
  ogd.predict(x);
  EXPECT_THROW(ogd.update(x, fb(1.5)), ContractViolation);
  EXPECT_NO_THROW(ogd.update(x, fb(1.0 + 1e-10)));
  EXPECT_THROW(ogd.update(x, fb(NAN)), ContractViolation);
}

// --- OGD ------------------------------------------------------------------------

TEST(Ogd, ZeroWeightsPredictZero) {
  OgdLearner ogd;
  EXPECT_EQ(ogd.predict(Example({{1, 0.7}, {4, -2.0}}))[0], 0.0);
}

TEST(Ogd, SingleStep) {
  OgdLearner ogd({1.0, 1, 0.1});
  const Example x({{1, 1.0}});
  ogd.predict(x);
  ogd.update(x, fb(-1.0));
  EXPECT_NEAR(ogd.weight(1), 0.1, 1e-15);
  EXPECT_NEAR(ogd.predict(x)[0], 0.1, 1e-15);
}

TEST(Ogd, ProjectsOntoBall) {
  OgdLearner ogd({1.0, 1, 5.0});
  const Example x({{1, 0.6}, {2, 0.8}});
  for (int i = 0; i < 10; ++i) {
    ogd.predict(x);
    ogd.update(x, fb(-1.0));
    EXPECT_LE(ogd.weight_norm(), 1.0 + 1e-12);
  }
  EXPECT_NEAR(ogd.weight_norm(), 1.0, 1e-12);
  EXPECT_NEAR(ogd.predict(x)[0], 1.0, 1e-12);
}

TEST(Ogd, SurvivesManyRescales) {
  // Forces the lazy scale through many shrinks and full renormalizations.
  OgdLearner ogd({1.0, 1, 10.0});
  Rng rng(5);
  for (int t = 0; t < 20000; ++t) {
    const Example x({{static_cast<FeatureId>(rng.index(20)), rng.uniform(-1, 1)}});
    ogd.predict(x);
    ogd.update(x, fb(rng.uniform(-1, 1)));
  }
  EXPECT_LE(ogd.weight_norm(), 1.0 + 1e-9);
  EXPECT_EQ(ogd.rounds(), 20000u);
}

TEST(Ogd, RegretWithinBound) {
  // Linear losses g_t w.x_t against the best fixed ||w|| <= 1 in two features.
  constexpr int T = 20000;
  OgdLearner ogd;
  Rng rng(8);
  double learner = 0.0, s1 = 0.0, s2 = 0.0;
  for (int t = 0; t < T; ++t) {
    const Example x({{1, rng.uniform(-1, 1)}, {2, rng.uniform(0, 1)}});
    const double g = rng.uniform(-0.2, 1.0);
    learner += g * ogd.predict(x)[0];
    s1 += g * x.value(1);
    s2 += g * x.value(2);
    ogd.update(x, fb(g));
  }
  const double best = -std::hypot(s1, s2);  // min over the unit ball of w.s
  const double g_max = std::sqrt(2.0);
  EXPECT_LE(learner - best, 1.5 * 1.0 * g_max * std::sqrt(static_cast<double>(T)));
}

TEST(Ogd, MultiOutput) {
  OgdLearner ogd({2.0, 2, 0.5});
  const Example x({{3, 1.0}});
  ogd.predict(x);
  ogd.update(x, LinearFeedback{Prediction{-0.6, 0.8}});
  EXPECT_NEAR(ogd.weight(3, 0), 0.3, 1e-15);
  EXPECT_NEAR(ogd.weight(3, 1), -0.4, 1e-15);
  EXPECT_THROW(ogd.weight(3, 2), std::out_of_range);
  EXPECT_THROW(OgdLearner({0.0}), std::invalid_argument);
}

// --- stumps -----------------------------------------------------------------------

TEST(Stump, EmptyExamplePredictsZero) {
  StumpLearner s;
  EXPECT_EQ(s.predict(Example{})[0], 0.0);
  EXPECT_FALSE(s.selected_feature(Example{}));
  EXPECT_NO_THROW(s.update(Example{}, fb(0.5)));
}

TEST(Stump, TiesGoToLowestId) {
  StumpLearner s;
  const Example x({{9, 1.0}, {4, 1.0}, {6, 1.0}});
  EXPECT_EQ(*s.selected_feature(x), 4u);
}

TEST(Stump, SelectsLowestCumulativeLoss) {
  StumpLearner s({1.0, 0.5});
  // Train feature 2 alone towards positive outputs.
  const Example only2({{2, 1.0}});
  for (int i = 0; i < 5; ++i) {
    s.predict(only2);
    s.update(only2, fb(-1.0));
  }
  EXPECT_GT(s.weight(2), 0.0);
  // Under feedback -1, feature 2's positive output earns negative loss.
  const Example both({{1, 1.0}, {2, 1.0}});
  s.predict(both);
  s.update(both, fb(-1.0));
  EXPECT_LT(s.cumulative_loss(2), s.cumulative_loss(1));
  EXPECT_EQ(*s.selected_feature(both), 2u);
  EXPECT_NEAR(s.predict(both)[0], std::min(1.0, s.weight(2)), 1e-15);
}

TEST(Stump, OutputBounded) {
  StumpLearner s({0.5, 10.0});
  const Example x({{1, 3.0}});
  for (int i = 0; i < 20; ++i) {
    EXPECT_LE(std::abs(s.predict(x)[0]), 0.5);
    s.update(x, fb(-1.0));
  }
  EXPECT_NEAR(s.predict(x)[0], 0.5, 1e-12);
}

// --- Hedge --------------------------------------------------------------------------

TEST(Hedge, SymmetricPoolUniformWeightsPredictZero) {
  HedgeLearner h(constant_pool({0.7, -0.7}));
  EXPECT_EQ(h.predict(Example{})[0], 0.0);
}

TEST(Hedge, EqualFeedbackKeepsWeightsUniform) {
  HedgeLearner h(constant_pool({0.5, 0.5}), {100});
  for (int i = 0; i < 50; ++i) {
    h.predict(Example{});
    h.update(Example{}, fb(i % 2 ? 0.3 : -0.8));
  }
  EXPECT_DOUBLE_EQ(h.weights()[0], 0.5);
  EXPECT_DOUBLE_EQ(h.weights()[1], 0.5);
}

TEST(Hedge, RegretWithinBound) {
  constexpr std::size_t T = 5000, M = 8;
  Rng rng(21);
  std::vector<double> means(M);
  for (double& m : means) m = rng.uniform(-0.3, 0.3);
  ExpWeights w(M, 2.0, T);
  std::vector<double> totals(M, 0.0), losses(M);
  double learner = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < M; ++i) losses[i] = std::clamp(means[i] + rng.uniform(-0.7, 0.7), -1.0, 1.0);
    const auto p = w.probabilities();
    for (std::size_t i = 0; i < M; ++i) {
      learner += p[i] * losses[i];
      totals[i] += losses[i];
    }
    w.observe(losses);
  }
  const double best = *std::min_element(totals.begin(), totals.end());
  EXPECT_LE(learner - best, 2.0 * std::sqrt(T * std::log(static_cast<double>(M))));
}

TEST(Hedge, DoublingTrickEpochs) {
  ExpWeights w(4, 2.0);
  const double r1 = w.rate();
  std::vector<double> zero(4, 0.0);
  w.observe(zero);  // epoch of length 1 ends; next epoch has length 2
  EXPECT_NEAR(w.rate(), r1 / std::sqrt(2.0), 1e-15);
  w.observe(zero);
  w.observe(zero);  // length-2 epoch ends
  EXPECT_NEAR(w.rate(), r1 / 2.0, 1e-15);
  EXPECT_EQ(w.rounds(), 3u);
}

TEST(Hedge, AdversarialLossesStayFinite) {
  ExpWeights w(3, 2.0, 10);
  const std::vector<double> l{1.0, -1.0, 0.0};
  for (int i = 0; i < 100000; ++i) w.observe(l);
  for (double p : w.probabilities()) EXPECT_TRUE(std::isfinite(p));
  EXPECT_NEAR(w.probabilities()[1], 1.0, 1e-12);
}

TEST(Hedge, SampleModeReturnsPoolMembers) {
  HedgeLearner h(constant_pool({0.25, -0.75, 1.0}), {std::nullopt, HedgeMode::sample, 4});
  EXPECT_FALSE(h.is_deterministic());
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    const double y = h.predict(Example{})[0];
    counts[y == 0.25 ? 0 : y == -0.75 ? 1 : 2]++;
    ASSERT_TRUE(y == 0.25 || y == -0.75 || y == 1.0);
    h.update(Example{}, fb(0.0));
  }
  for (int c : counts) EXPECT_NEAR(c, 1000, 150);
}

// --- symmetrization -----------------------------------------------------------------

TEST(Symmetrized, ZeroFeedbackGivesUniformMixture) {
  SymmetrizedLearner s(std::make_unique<ConstantLearner>(Prediction{0.6}),
                       std::make_unique<ConstantLearner>(Prediction{0.3}), 100);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(s.predict(Example{})[0], (0.6 - 0.3 + 0.0) / 3.0, 1e-15);
    s.update(Example{}, fb(0.0));
  }
}

TEST(Symmetrized, ShiftsTowardsNegatedCopy) {
  // Both copies predict +0.5; under g = +1 the negated copy (-0.5) is best.
  constexpr int T = 1000;
  SymmetrizedLearner s(std::make_unique<ConstantLearner>(Prediction{0.5}, 0.5),
                       std::make_unique<ConstantLearner>(Prediction{0.5}, 0.5), T);
  double composite = 0.0;
  for (int t = 0; t < T; ++t) {
    composite += s.predict(Example{})[0];
    s.update(Example{}, fb(1.0));
  }
  EXPECT_GT(s.weights()[1], 0.99);
  const double best_arm = -0.5 * T;
  // Hedge regret over 3 arms with range 2D = 1.
  EXPECT_LE(composite - best_arm, std::sqrt(T * std::log(3.0) / 2.0) + 1e-9);
}

TEST(Symmetrized, NegatedCopyReceivesNegatedFeedback) {
  auto pos = std::make_unique<ConstantLearner>(Prediction{0.1});
  auto neg = std::make_unique<ConstantLearner>(Prediction{0.2});
  auto* p = pos.get();
  auto* n = neg.get();
  SymmetrizedLearner s(std::move(pos), std::move(neg));
  s.predict(Example{});
  s.update(Example{}, fb(0.4));
  EXPECT_EQ(p->feedback.at(0)[0], 0.4);
  EXPECT_EQ(n->feedback.at(0)[0], -0.4);
}

TEST(Symmetrized, FactoryPairsCopies) {
  std::vector<std::size_t> made;
  auto f = symmetrize([&](std::size_t k) {
    made.push_back(k);
    return std::make_unique<ConstantLearner>(Prediction{0.0});
  });
  f(0);
  f(3);
  EXPECT_EQ(made, (std::vector<std::size_t>{0, 1, 6, 7}));
}

// --- scaling --------------------------------------------------------------------------

TEST(Scaled, ScalesPredictionsAndBound) {
  ScaledLearner s(std::make_unique<ConstantLearner>(Prediction{0.4}), 3.0);
  EXPECT_NEAR(s.predict(Example{})[0], 1.2, 1e-15);
  EXPECT_EQ(s.output_bound(), 3.0);
  EXPECT_THROW(ScaledLearner(std::make_unique<ConstantLearner>(Prediction{0.4}), 0.5),
               std::invalid_argument);
  EXPECT_THROW(ScaledLearner(std::make_unique<ConstantLearner>(Prediction{0.4}), INFINITY),
               std::invalid_argument);
}

TEST(Scaled, LambdaOneIsIdentity) {
  OgdLearner bare;
  ScaledLearner wrapped(std::make_unique<OgdLearner>(), 1.0);
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const Example x({{1, rng.uniform(-1, 1)}, {2, rng.uniform(-1, 1)}});
    const double g = rng.uniform(-1, 1);
    EXPECT_EQ(bare.predict(x), wrapped.predict(x));
    bare.update(x, fb(g));
    wrapped.update(x, fb(g));
  }
}

TEST(Scaled, RegretScalesWithLambda) {
  // lambda * A against the best lambda * f is lambda times A's regret.
  constexpr int T = 4000;
  constexpr double lambda = 3.0;
  auto pool = std::make_shared<SymmetricPool>(std::make_shared<RandomFeaturePool>(4, 2, 1));
  ScaledLearner s(std::make_unique<HedgeLearner>(pool, HedgeOptions{T}), lambda);
  Rng rng(3);
  std::vector<double> totals(pool->size(), 0.0);
  double learner = 0.0;
  for (int t = 0; t < T; ++t) {
    const Example x({{1, rng.uniform(-1, 1)}, {2, rng.uniform(-1, 1)}});
    const double g = std::sin(3.0 * x.value(1)) * 0.9;
    learner += g * s.predict(x)[0];
    const auto v = pool->evaluate(x);
    for (std::size_t k = 0; k < v.size(); ++k) totals[k] += g * lambda * v[k];
    s.update(x, fb(g));
  }
  const double best = *std::min_element(totals.begin(), totals.end());
  const double hedge_regret = 2.0 * std::sqrt(T * std::log(static_cast<double>(pool->size())));
  EXPECT_LE(learner - best, lambda * hedge_regret);
}

// --- greedy -------------------------------------------------------------------------------

TEST(Greedy, StepSizes) {
  EXPECT_NEAR(greedy_step_size(RegretModel::sqrt, 100.0, 1.0, 1.0, 10000), std::sqrt(0.02), 1e-12);
  EXPECT_NEAR(greedy_step_size(RegretModel::alpha_linear, 100.0, 1.0, 1.0, 10000), 0.02, 1e-12);
  EXPECT_THROW(greedy_step_size(RegretModel::sqrt, 1.0, 0.0, 1.0, 10), std::invalid_argument);
  EXPECT_THROW(greedy_step_size(RegretModel::sqrt, 1.0, 1.0, 0.0, 10), std::invalid_argument);
  EXPECT_THROW(greedy_step_size(RegretModel::sqrt, 1.0, 1.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(greedy_step_size(RegretModel::sqrt, -1.0, 1.0, 1.0, 10), std::invalid_argument);
}

TEST(Greedy, AdapterEnforcesOffsetBound) {
  GreedyAdapter a(std::make_unique<GreedyOgd>(), 0.1, 2.0);
  EXPECT_NO_THROW(a.set_offset(Prediction{2.0}));
  EXPECT_THROW(a.set_offset(Prediction{2.5}), ContractViolation);
}

TEST(Greedy, AdapterNeedsRoundLoss) {
  GreedyAdapter a(std::make_unique<GreedyOgd>(), 0.1, 1.0);
  const Example x({{1, 1.0}});
  a.set_offset(Prediction{0.0});
  a.predict(x);
  EXPECT_THROW(a.update(x, fb(0.1)), ContractViolation);
  a.set_round_loss(LossInstance(LossClass::squared(), Prediction{1.0}));
  EXPECT_NO_THROW(a.update(x, fb(0.1)));
}

TEST(Greedy, ZeroStepLeavesInnerIndifferent) {
  auto pool = constant_pool({0.9, -0.9, 0.1});
  auto inner = std::make_unique<GreedyHedge>(pool, 0.0, 2.0, 100);
  auto* h = inner.get();
  GreedyAdapter a(std::move(inner), 0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    a.set_offset(Prediction{0.3});
    EXPECT_LE(std::abs(a.predict(Example{})[0]), 1.0);
    a.set_round_loss(LossInstance(LossClass::squared(), Prediction{0.8}));
    a.update(Example{}, fb(0.0));
  }
  for (double p : h->weights()) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Greedy, HedgeRegretOnGreedyLosses) {
  // The inner learner pays l(y' + step * f(x)); its regret against the best
  // member under those losses is Hedge regret with range 2 * step * D * L.
  constexpr std::size_t T = 3000;
  constexpr double step = 0.5, lipschitz = 2.0;
  auto pool = std::make_shared<RandomFeaturePool>(6, 1, 2);
  GreedyAdapter a(std::make_unique<GreedyHedge>(pool, step, lipschitz, T), step, 1.0);
  Rng rng(6);
  std::vector<double> totals(pool->size(), 0.0);
  double learner = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const Example x({{1, rng.uniform(-1, 1)}});
    const LossInstance loss(LossClass::squared(), Prediction{0.4 * x.value(1)});
    const Prediction offset{0.2 * x.value(1)};
    a.set_offset(offset);
    learner += loss.evaluate(offset + step * a.predict(x));
    const auto v = pool->evaluate(x);
    for (std::size_t k = 0; k < v.size(); ++k) totals[k] += loss.evaluate(Prediction{offset[0] + step * v[k]});
    a.set_round_loss(loss);
    a.update(x, fb(0.0));
  }
  const double best = *std::min_element(totals.begin(), totals.end());
  const double range = 2.0 * step * 1.0 * lipschitz;
  // Mixture prediction: by convexity its loss is at most the Hedge mixture loss.
  EXPECT_LE(learner - best, range * std::sqrt(T * std::log(6.0) / 2.0));
}

TEST(Greedy, OgdLearnsLinearTarget) {
  constexpr int T = 5000;
  GreedyAdapter a(std::make_unique<GreedyOgd>(1.0), 1.0, 1.0);
  Rng rng(4);
  double late = 0.0;
  for (int t = 0; t < T; ++t) {
    const Example x({{1, rng.uniform(-1, 1)}});
    const LossInstance loss(LossClass::squared(), Prediction{0.6 * x.value(1)});
    a.set_offset(Prediction{0.0});
    const double y = a.predict(x)[0];
    if (t >= T - 500) late += loss.evaluate(Prediction{y});
    a.set_round_loss(loss);
    a.update(x, fb(0.0));
  }
  EXPECT_LT(late / 500.0, 1e-3);
}
