#include "ogb/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ogb {

double Prediction::norm() const {
  if (values_.size() == 1) return std::abs(values_[0]);
  double sq = 0.0;
  for (double v : values_) sq += v * v;
  return std::sqrt(sq);
}

bool Prediction::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Prediction& Prediction::operator+=(const Prediction& other) {
  if (other.dim() != dim()) throw std::invalid_argument("prediction dimension mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Prediction& Prediction::operator-=(const Prediction& other) {
  if (other.dim() != dim()) throw std::invalid_argument("prediction dimension mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Prediction& Prediction::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

double dot(const Prediction& a, const Prediction& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("dot: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
  return sum;
}

Prediction project(const Prediction& y, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("project: radius must be positive and finite");
  }
  if (!y.is_finite()) throw std::invalid_argument("project: non-finite input");
  const double n = y.norm();
  if (n <= radius) return y;
  Prediction out = y;
  out *= radius / n;
  while (out.norm() > radius) out *= 1.0 - 0x1p-52;
  return out;
}

double clip_unit_interval(double s) { return std::max(std::min(s, 1.0), 0.0); }

FeatureId hash_feature_name(std::string_view name) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : name) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

Example::Example(std::vector<Feature> features, std::optional<Prediction> label,
                 std::uint64_t index)
    : label_(std::move(label)), index_(index) {
  if (label_ && !label_->is_finite()) throw std::invalid_argument("example label is not finite");
  std::erase_if(features, [](const Feature& f) { return f.value == 0.0; });
  for (const Feature& f : features) {
    if (!std::isfinite(f.value)) {
      throw std::invalid_argument("feature " + std::to_string(f.id) + " has a non-finite value");
    }
  }
  std::sort(features.begin(), features.end(),
            [](const Feature& a, const Feature& b) { return a.id < b.id; });
  auto dup = std::adjacent_find(features.begin(), features.end(),
                                [](const Feature& a, const Feature& b) { return a.id == b.id; });
  if (dup != features.end()) {
    throw std::invalid_argument("duplicate feature id " + std::to_string(dup->id));
  }
  features_ = std::move(features);
}

Example Example::from_named(const std::vector<std::pair<std::string, double>>& named,
                            std::optional<Prediction> label, std::uint64_t index) {
  std::vector<std::pair<FeatureId, std::string>> ids;
  std::vector<Feature> features;
  for (const auto& [name, value] : named) {
    if (value == 0.0) continue;
    const FeatureId id = hash_feature_name(name);
    features.push_back({id, value});
    ids.emplace_back(id, name);
  }
  Example ex(std::move(features), std::move(label), index);
  std::sort(ids.begin(), ids.end());
  ex.names_.reserve(ids.size());
  for (auto& [id, name] : ids) ex.names_.push_back(std::move(name));
  return ex;
}

double Example::value(FeatureId id) const {
  auto it = std::lower_bound(features_.begin(), features_.end(), id,
                             [](const Feature& f, FeatureId key) { return f.id < key; });
  return (it != features_.end() && it->id == id) ? it->value : 0.0;
}

double Example::feature_norm() const {
  double sq = 0.0;
  for (const Feature& f : features_) sq += f.value * f.value;
  return std::sqrt(sq);
}

Example Example::with_label(std::optional<Prediction> label) const {
  Example copy = *this;
  if (label && !label->is_finite()) throw std::invalid_argument("example label is not finite");
  copy.label_ = std::move(label);
  return copy;
}

Example Example::with_index(std::uint64_t index) const {
  Example copy = *this;
  copy.index_ = index;
  return copy;
}

}  // namespace ogb
