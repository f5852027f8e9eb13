#include "fcmstop/feature_matrix.hpp"

#include <cmath>
#include <string>

#include "fcmstop/errors.hpp"

namespace fcmstop {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InputError("matrix data has " + std::to_string(data_.size()) + " values, expected " +
                     std::to_string(rows_ * cols_));
  }
}

FeatureMatrix::FeatureMatrix(std::size_t n_points, std::size_t n_dims, std::vector<double> values)
    : FeatureMatrix(Matrix(n_points, n_dims, std::move(values))) {}

FeatureMatrix::FeatureMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InputError("feature matrix needs at least one point and one dimension");
  }
  const auto& v = values_.data();
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    if (!std::isfinite(v[idx])) {
      throw InputError("non-finite feature at point " + std::to_string(idx / values_.cols()) + ", dim " +
                       std::to_string(idx % values_.cols()));
    }
  }
}

FeatureMatrix FeatureMatrix::scaled(double factor) const {
  Matrix out = values_;
  for (double& x : out.data()) x *= factor;
  return FeatureMatrix(std::move(out));
}

}  // namespace fcmstop
