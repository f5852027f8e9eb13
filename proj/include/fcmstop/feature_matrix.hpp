#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fcmstop/matrix.hpp"

namespace fcmstop {

/// Clustering input: one row per point (pixel), one column per feature.
/// Construction validates that the matrix is non-empty and finite.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t n_points, std::size_t n_dims, std::vector<double> values);
  explicit FeatureMatrix(Matrix values);

  std::size_t n_points() const noexcept { return values_.rows(); }
  std::size_t n_dims() const noexcept { return values_.cols(); }

  std::span<const double> point(std::size_t i) const noexcept { return values_.row(i); }
  double operator()(std::size_t i, std::size_t k) const noexcept { return values_(i, k); }

  const Matrix& values() const noexcept { return values_; }

  /// Every value multiplied by `factor` (factor must be finite).
  FeatureMatrix scaled(double factor) const;

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;

 private:
  Matrix values_;
};

}  // namespace fcmstop
