#include "ogb/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ogb/scaled_learner.hpp"

namespace ogb {

namespace {

std::vector<std::unique_ptr<BaseLearner>> build_learners(const LearnerFactory& factory,
                                                         std::size_t stages, double bound,
                                                         bool greedy_offsets) {
  if (!factory) throw std::invalid_argument("booster needs a learner factory");
  if (stages == 0) throw std::invalid_argument("number of stages must be positive");
  std::vector<std::unique_ptr<BaseLearner>> learners;
  learners.reserve(stages);
  for (std::size_t i = 0; i < stages; ++i) {
    auto a = factory(i);
    if (!a) throw std::invalid_argument("learner factory returned null");
    if (a->output_bound() > bound * (1.0 + 1e-12)) {
      throw std::invalid_argument("learner output bound " + std::to_string(a->output_bound()) +
                                  " exceeds booster bound D = " + std::to_string(bound));
    }
    if (!learners.empty() && a->output_dim() != learners.front()->output_dim()) {
      throw std::invalid_argument("learner copies disagree on output dimension");
    }
    if (greedy_offsets && !a->accepts_offsets()) {
      throw std::invalid_argument("greedy offsets need a learner that accepts offsets");
    }
    learners.push_back(std::move(a));
  }
  return learners;
}

void check_round_trace(bool pending, std::uint64_t round, const StageTrace& trace,
                       std::size_t stages) {
  if (!pending) throw ContractViolation("update without a pending prediction");
  if (trace.round != round || trace.partial_sums.size() != stages + 1 ||
      trace.arm_outputs.size() != stages) {
    throw ContractViolation("trace does not belong to the pending round");
  }
}

}  // namespace

SpanBooster::SpanBooster(const LearnerFactory& factory, SpanBoosterOptions options)
    : options_(options),
      learners_(build_learners(factory, options.stages, options.bound, options.greedy_offsets)),
      dim_(learners_.front()->output_dim()),
      step_(options.step ? *options.step : default_step(options.stages)),
      sigma_(options.stages, 0.0) {
  validate_step(step_, options_.stages);
  double radius = 0.0;
  if (options_.corollary_mode) {
    for (const auto& a : learners_) {
      if (!a->is_deterministic()) {
        throw std::invalid_argument("corollary mode needs a deterministic base learner");
      }
    }
    radius = step_ * static_cast<double>(options_.stages) * options_.bound;
  } else {
    radius = solve_radius(options_.loss, step_, options_.stages, options_.bound);
  }
  ball_ = options_.loss.ball_params(radius);
  if (!(ball_.lipschitz > 0.0)) throw std::invalid_argument("loss has L_B = 0 on the working ball");
}

const StageTrace& SpanBooster::predict_trace(const Example& x) {
  if (pending_) throw ContractViolation("predict called twice without update");
  const std::size_t n = learners_.size();
  trace_.round = round_ + 1;
  trace_.partial_sums.assign(1, Prediction::zeros(dim_));
  trace_.arm_outputs.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const Prediction& prev = trace_.partial_sums.back();
    if (options_.greedy_offsets) learners_[i]->set_offset(prev);
    Prediction a = learners_[i]->predict(x);
    Prediction y = (1.0 - sigma_[i] * step_) * prev;
    y += step_ * a;
    trace_.partial_sums.push_back(project(y, ball_.radius));
    trace_.arm_outputs.push_back(std::move(a));
  }
  pending_ = true;
  return trace_;
}

void SpanBooster::update(const Example& x, const LossInstance& loss) {
  update_trace(x, trace_, loss);
}

void SpanBooster::update_trace(const Example& x, const StageTrace& trace, const LossInstance& loss) {
  check_round_trace(pending_, round_ + 1, trace, learners_.size());
  ++round_;
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    const Prediction& prev = trace.partial_sums[i];
    const Prediction grad = loss.gradient(prev);
    LinearFeedback fb{(1.0 / ball_.lipschitz) * grad};
    if (observer_) observer_(i, x, trace.arm_outputs[i], fb);
    if (options_.greedy_offsets) learners_[i]->set_round_loss(loss);
    learners_[i]->update(x, fb);
    sigma_[i] = shrinkage_update(sigma_[i], dot(grad, prev), ball_.lipschitz, ball_.radius, round_);
  }
  pending_ = false;
}

double SpanBooster::shrinkage_update(double sigma, double grad_dot_prev, double lipschitz,
                                     double radius, std::uint64_t round) {
  const double rate = 1.0 / (lipschitz * radius * std::sqrt(static_cast<double>(round)));
  return clip_unit_interval(sigma + rate * grad_dot_prev);
}

ChBooster::ChBooster(const LearnerFactory& factory, ChBoosterOptions options)
    : options_(options),
      learners_(build_learners(factory, options.stages, options.bound, options.greedy_offsets)),
      dim_(learners_.front()->output_dim()),
      lipschitz_(options.loss.ball_params(options.bound).lipschitz) {
  if (!(lipschitz_ > 0.0)) throw std::invalid_argument("loss has L_D = 0 on the output ball");
}

const StageTrace& ChBooster::predict_trace(const Example& x) {
  if (pending_) throw ContractViolation("predict called twice without update");
  trace_.round = round_ + 1;
  trace_.partial_sums.assign(1, Prediction::zeros(dim_));
  trace_.arm_outputs.clear();
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    const Prediction& prev = trace_.partial_sums.back();
    if (options_.greedy_offsets) learners_[i]->set_offset(prev);
    Prediction a = learners_[i]->predict(x);
    const double eta = stage_step(i + 1);
    if (eta == 1.0) {
      trace_.partial_sums.push_back(a);
    } else {
      Prediction y = (1.0 - eta) * prev;
      y += eta * a;
      trace_.partial_sums.push_back(std::move(y));
    }
    trace_.arm_outputs.push_back(std::move(a));
  }
  pending_ = true;
  return trace_;
}

void ChBooster::update(const Example& x, const LossInstance& loss) { update_trace(x, trace_, loss); }

void ChBooster::update_trace(const Example& x, const StageTrace& trace, const LossInstance& loss) {
  check_round_trace(pending_, round_ + 1, trace, learners_.size());
  ++round_;
  for (std::size_t i = 0; i < learners_.size(); ++i) {
    LinearFeedback fb{(1.0 / lipschitz_) * loss.gradient(trace.partial_sums[i])};
    if (observer_) observer_(i, x, trace.arm_outputs[i], fb);
    if (options_.greedy_offsets) learners_[i]->set_round_loss(loss);
    learners_[i]->update(x, fb);
  }
  pending_ = false;
}

SingleLearner::SingleLearner(std::unique_ptr<BaseLearner> learner, LossClass loss, double bound,
                             BaselineFeedback feedback)
    : learner_(std::move(learner)),
      lipschitz_(loss.ball_params(bound).lipschitz),
      feedback_(feedback) {
  if (!learner_) throw std::invalid_argument("baseline needs a learner");
  if (!(lipschitz_ > 0.0)) throw std::invalid_argument("loss has L_D = 0 on the output ball");
}

Prediction SingleLearner::predict(const Example& x) {
  if (pending_) throw ContractViolation("predict called twice without update");
  pending_ = learner_->predict(x);
  return *pending_;
}

void SingleLearner::update(const Example& x, const LossInstance& loss) {
  if (!pending_) throw ContractViolation("update without a pending prediction");
  const Prediction at = feedback_ == BaselineFeedback::zero ? Prediction::zeros(pending_->dim())
                                                            : *pending_;
  LinearFeedback fb{(1.0 / lipschitz_) * loss.gradient(at)};
  if (observer_) observer_(0, x, *pending_, fb);
  learner_->update(x, fb);
  pending_.reset();
}

ScalingConfig ScalingConfig::make(const LossClass& loss, double step, std::size_t stages,
                                  double bound, double lambda) {
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("scale factor lambda must be >= 1");
  }
  return {lambda, solve_radius(loss, step, stages, lambda * bound)};
}

double ScalingConfig::scaled_norm(double l1) const { return std::max(1.0, l1 / lambda); }

std::unique_ptr<SpanBooster> make_scaled_span_booster(LearnerFactory factory,
                                                      SpanBoosterOptions options, double lambda) {
  auto scaled = scale_learners(std::move(factory), lambda);
  options.bound *= lambda;
  return std::make_unique<SpanBooster>(scaled, options);
}

}  // namespace ogb
