#include "fcmstop/lof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fcmstop/errors.hpp"

namespace fcmstop {

void LofConfig::validate(std::size_t n_points) const {
  if (n_neighbors < 1) throw ConfigError("n_neighbors must be >= 1");
  if (n_neighbors >= n_points) {
    throw ConfigError("n_neighbors (" + std::to_string(n_neighbors) + ") must be below the number of points (" +
                      std::to_string(n_points) + ")");
  }
  if (!(outliers_fraction > 0.0 && outliers_fraction < 1.0)) throw ConfigError("outliers_fraction must lie in (0, 1)");
}

std::vector<double> lof_scores(const Matrix& points, std::size_t k) {
  const std::size_t n = points.rows();
  if (k < 1 || k >= n) throw InputError("lof_scores needs 1 <= k < number of points");
  for (double v : points.data()) {
    if (!std::isfinite(v)) throw InputError("lof_scores: non-finite coordinate");
  }

  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double diff = points(i, c) - points(j, c);
        acc += diff * diff;
      }
      dist(i, j) = dist(j, i) = std::sqrt(acc);
    }
  }

  // k-distance and the (tie-inclusive) k-neighborhood of each point.
  std::vector<double> k_distance(n);
  std::vector<std::vector<std::size_t>> neighbors(n);
  std::vector<double> others;
  others.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(dist(i, j));
    }
    std::nth_element(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k - 1), others.end());
    k_distance[i] = others[k - 1];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && dist(i, j) <= k_distance[i]) neighbors[i].push_back(j);
    }
  }

  std::vector<double> lrd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double reach_sum = 0.0;
    for (std::size_t o : neighbors[i]) reach_sum += std::max(k_distance[o], dist(i, o));
    lrd[i] = reach_sum > 0.0 ? static_cast<double>(neighbors[i].size()) / reach_sum : kMaxLocalDensity;
    lrd[i] = std::min(lrd[i], kMaxLocalDensity);
  }

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    double ratio_sum = 0.0;
    for (std::size_t o : neighbors[i]) ratio_sum += lrd[o] / lrd[i];
    scores[i] = ratio_sum / static_cast<double>(neighbors[i].size());
  }
  return scores;
}

std::size_t outlier_count(std::size_t n_points, double fraction) {
  // The slack absorbs representation error, e.g. 0.03 * 100 = 3.0000000000000004.
  const double raw = fraction * static_cast<double>(n_points);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

OutlierSplit remove_outliers(const Matrix& points, const std::vector<double>& scores, double fraction) {
  const std::size_t n = points.rows();
  if (scores.size() != n) throw InputError("remove_outliers: scores not aligned with points");
  if (!(fraction > 0.0 && fraction < 1.0)) throw InputError("remove_outliers: fraction must lie in (0, 1)");
  const std::size_t n_remove = outlier_count(n, fraction);
  if (n_remove >= n) throw InputError("remove_outliers: fraction would remove every point");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  OutlierSplit split;
  split.removed.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_remove));
  std::sort(split.removed.begin(), split.removed.end());

  std::vector<bool> drop(n, false);
  for (std::size_t idx : split.removed) drop[idx] = true;
  std::vector<double> kept_values;
  kept_values.reserve((n - n_remove) * points.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (drop[i]) continue;
    split.kept_indices.push_back(i);
    const auto row = points.row(i);
    kept_values.insert(kept_values.end(), row.begin(), row.end());
  }
  split.kept = Matrix(n - n_remove, points.cols(), std::move(kept_values));
  return split;
}

}  // namespace fcmstop
