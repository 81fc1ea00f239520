#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ogb {

/// Dense point in the prediction space R^d.
///
/// Every scalar regression setting uses d = 1; the vector path stays general
/// so multi-output losses can reuse the same boosters. All norms are
/// Euclidean, which collapses to the absolute value for d = 1.
class Prediction {
 public:
  Prediction() = default;
  explicit Prediction(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
  Prediction(std::initializer_list<double> values) : values_(values) {}
  explicit Prediction(std::vector<double> values) : values_(std::move(values)) {}

  static Prediction zeros(std::size_t dim) { return Prediction(dim, 0.0); }

  std::size_t dim() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double norm() const;
  bool is_finite() const;

  Prediction& operator+=(const Prediction& other);
  Prediction& operator-=(const Prediction& other);
  Prediction& operator*=(double scale);

  friend Prediction operator+(Prediction a, const Prediction& b) { return a += b; }
  friend Prediction operator-(Prediction a, const Prediction& b) { return a -= b; }
  friend Prediction operator*(double s, Prediction a) { return a *= s; }
  friend Prediction operator*(Prediction a, double s) { return a *= s; }
  friend Prediction operator-(Prediction a) { return a *= -1.0; }
  friend bool operator==(const Prediction&, const Prediction&) = default;

 private:
  std::vector<double> values_;
};

/// Inner product. Throws std::invalid_argument on a dimension mismatch.
double dot(const Prediction& a, const Prediction& b);

inline double norm(const Prediction& y) { return y.norm(); }

/// Euclidean projection onto the closed ball of the given radius.
///
/// Points inside the ball are returned unchanged (bit-for-bit). Points outside
/// are scaled onto the sphere; the result is nudged inward if rounding left its
/// computed norm above the radius, so projecting twice is a no-op.
/// Throws std::invalid_argument on a non-finite input or a non-positive radius.
Prediction project(const Prediction& y, double radius);

/// max(min(s, 1), 0).
double clip_unit_interval(double s);

using FeatureId = std::uint32_t;

/// 32-bit FNV-1a hash used to key named features.
FeatureId hash_feature_name(std::string_view name);

struct Feature {
  FeatureId id = 0;
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// One element of a stream: sparse features plus an optional label.
///
/// Construction sorts features by id, drops explicit zeros and rejects
/// non-finite values or duplicate ids. `index` is the position of the example
/// in its stream; the lower-bound construction uses it as the input x_t = t.
class Example {
 public:
  Example() = default;
  Example(std::vector<Feature> features, std::optional<Prediction> label = std::nullopt,
          std::uint64_t index = 0);

  /// Named features; ids are the hashes of the names, names kept for diagnostics.
  static Example from_named(const std::vector<std::pair<std::string, double>>& named,
                            std::optional<Prediction> label = std::nullopt,
                            std::uint64_t index = 0);

  std::span<const Feature> features() const noexcept { return features_; }
  const std::optional<Prediction>& label() const noexcept { return label_; }
  std::uint64_t index() const noexcept { return index_; }
  /// Raw names aligned with features(); empty when the source had integer ids.
  std::span<const std::string> feature_names() const noexcept { return names_; }

  /// Value of a feature, 0 when absent.
  double value(FeatureId id) const;
  double feature_norm() const;
  bool empty() const noexcept { return features_.empty(); }

  Example with_label(std::optional<Prediction> label) const;
  Example with_index(std::uint64_t index) const;

  friend bool operator==(const Example&, const Example&) = default;

 private:
  std::vector<Feature> features_;
  std::vector<std::string> names_;
  std::optional<Prediction> label_;
  std::uint64_t index_ = 0;
};

}  // namespace ogb
