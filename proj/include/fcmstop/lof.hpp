#pragma once

#include <cstddef>
#include <vector>

#include "fcmstop/matrix.hpp"

namespace fcmstop {

struct LofConfig {
  std::size_t n_neighbors = 40;
  double outliers_fraction = 0.03;

  /// Throws ConfigError; `n_points` is the size of the set to be scored.
  void validate(std::size_t n_points) const;

  friend bool operator==(const LofConfig&, const LofConfig&) = default;
};

/// Local reachability density assigned when every neighbor is a duplicate.
inline constexpr double kMaxLocalDensity = 1e12;

/// Local Outlier Factor of every row of `points` (N x d) using exact
/// pairwise distances. k-distance neighborhoods keep all ties.
std::vector<double> lof_scores(const Matrix& points, std::size_t k);

struct OutlierSplit {
  Matrix kept;                       ///< surviving rows, input order
  std::vector<std::size_t> kept_indices;
  std::vector<std::size_t> removed;  ///< ascending
};

/// Number of points removed for a given fraction: ceil(fraction * n).
std::size_t outlier_count(std::size_t n_points, double fraction);

/// Drops the ceil(fraction * N) highest-scoring rows (lower index first on ties).
OutlierSplit remove_outliers(const Matrix& points, const std::vector<double>& scores, double fraction);

}  // namespace fcmstop
