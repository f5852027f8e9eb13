#include "fcmstop/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fcmstop/errors.hpp"

namespace fcmstop::kernels {

void membership_column(std::span<const double> sq_dist, double fuzzifier, std::span<double> out) noexcept {
  const std::size_t n_clusters = sq_dist.size();
  constexpr double kCoincidentSq = kCoincidentDistance * kCoincidentDistance;

  std::size_t n_coincident = 0;
  double min_sq = sq_dist[0];
  for (std::size_t j = 0; j < n_clusters; ++j) {
    if (sq_dist[j] < kCoincidentSq) ++n_coincident;
    min_sq = std::min(min_sq, sq_dist[j]);
  }
  if (n_coincident > 0) {
    const double share = 1.0 / static_cast<double>(n_coincident);
    for (std::size_t j = 0; j < n_clusters; ++j) out[j] = sq_dist[j] < kCoincidentSq ? share : 0.0;
    return;
  }

  // u_j = 1 / sum_k (d_j / d_k)^(2/(m-1)), evaluated through weights
  // w_j = (d_min^2 / d_j^2)^(1/(m-1)) in (0, 1] so nothing overflows.
  const double exponent = 1.0 / (fuzzifier - 1.0);
  double total = 0.0;
  for (std::size_t j = 0; j < n_clusters; ++j) {
    const double ratio = min_sq / sq_dist[j];
    out[j] = exponent == 1.0 ? ratio : std::pow(ratio, exponent);
    total += out[j];
  }
  for (std::size_t j = 0; j < n_clusters; ++j) out[j] /= total;
}

namespace {

// Shared per-cluster and per-point bodies; both backends call exactly these.

void center_for_cluster(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier, std::size_t j,
                        Matrix& centers) {
  const std::size_t n_points = features.n_points();
  const std::size_t n_dims = features.n_dims();
  auto center = centers.row(j);
  std::fill(center.begin(), center.end(), 0.0);
  double weight_sum = 0.0;
  const auto u = memberships.row(j);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double w = membership_power(u[i], fuzzifier);
    weight_sum += w;
    const auto x = features.point(i);
    for (std::size_t k = 0; k < n_dims; ++k) center[k] += w * x[k];
  }
  if (!(weight_sum >= kDegenerateWeight)) throw DegenerateClusterError(j, weight_sum);
  for (std::size_t k = 0; k < n_dims; ++k) center[k] /= weight_sum;
}

void memberships_for_point(const FeatureMatrix& features, const Matrix& centers, double fuzzifier, std::size_t i,
                           std::span<double> sq_scratch, std::span<double> col_scratch, Matrix& memberships) {
  const std::size_t n_clusters = centers.rows();
  const auto x = features.point(i);
  for (std::size_t j = 0; j < n_clusters; ++j) sq_scratch[j] = squared_distance(x, centers.row(j));
  membership_column(sq_scratch, fuzzifier, col_scratch);
  for (std::size_t j = 0; j < n_clusters; ++j) memberships(j, i) = col_scratch[j];
}

double objective_term(const FeatureMatrix& features, const Matrix& memberships, const Matrix& centers,
                      double fuzzifier, std::size_t i) {
  const auto x = features.point(i);
  double acc = 0.0;
  for (std::size_t j = 0; j < centers.rows(); ++j) {
    acc += membership_power(memberships(j, i), fuzzifier) * squared_distance(x, centers.row(j));
  }
  return acc;
}

double checked_objective(double total) {
  if (!std::isfinite(total)) throw NumericError("objective is not finite");
  return total;
}

void prepare(Matrix& out, std::size_t rows, std::size_t cols) {
  if (out.rows() != rows || out.cols() != cols) out = Matrix(rows, cols);
}

}  // namespace

namespace serial {

void compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier, Matrix& centers) {
  prepare(centers, memberships.rows(), features.n_dims());
  for (std::size_t j = 0; j < memberships.rows(); ++j) {
    center_for_cluster(features, memberships, fuzzifier, j, centers);
  }
}

void update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier, Matrix& memberships) {
  prepare(memberships, centers.rows(), features.n_points());
  std::vector<double> sq(centers.rows()), col(centers.rows());
  for (std::size_t i = 0; i < features.n_points(); ++i) {
    memberships_for_point(features, centers, fuzzifier, i, sq, col, memberships);
  }
}

double objective(const FeatureMatrix& features, const Matrix& memberships, const Matrix& centers, double fuzzifier) {
  double total = 0.0;
  for (std::size_t i = 0; i < features.n_points(); ++i) {
    total += objective_term(features, memberships, centers, fuzzifier, i);
  }
  return checked_objective(total);
}

double max_abs_difference(const Matrix& a, const Matrix& b) noexcept {
  double worst = 0.0;
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x[k] - y[k]));
  return worst;
}

}  // namespace serial

namespace parallel {

void compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier, Matrix& centers) {
  prepare(centers, memberships.rows(), features.n_dims());
  const auto n_clusters = static_cast<std::ptrdiff_t>(memberships.rows());
  // Exceptions cannot cross an OpenMP region; record the first degenerate cluster.
  std::ptrdiff_t bad_cluster = -1;
  double bad_weight = 0.0;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < n_clusters; ++j) {
    try {
      center_for_cluster(features, memberships, fuzzifier, static_cast<std::size_t>(j), centers);
    } catch (const DegenerateClusterError&) {
#pragma omp critical(fcmstop_degenerate)
      {
        if (bad_cluster < 0 || j < bad_cluster) {
          bad_cluster = j;
          double w = 0.0;
          for (double u : memberships.row(static_cast<std::size_t>(j))) w += membership_power(u, fuzzifier);
          bad_weight = w;
        }
      }
    }
  }
  if (bad_cluster >= 0) throw DegenerateClusterError(static_cast<std::size_t>(bad_cluster), bad_weight);
}

void update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier, Matrix& memberships) {
  prepare(memberships, centers.rows(), features.n_points());
  const auto n_points = static_cast<std::ptrdiff_t>(features.n_points());
#pragma omp parallel
  {
    std::vector<double> sq(centers.rows()), col(centers.rows());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n_points; ++i) {
      memberships_for_point(features, centers, fuzzifier, static_cast<std::size_t>(i), sq, col, memberships);
    }
  }
}

double objective(const FeatureMatrix& features, const Matrix& memberships, const Matrix& centers, double fuzzifier) {
  const auto n_points = static_cast<std::ptrdiff_t>(features.n_points());
  std::vector<double> terms(features.n_points());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_points; ++i) {
    terms[static_cast<std::size_t>(i)] =
        objective_term(features, memberships, centers, fuzzifier, static_cast<std::size_t>(i));
  }
  double total = 0.0;
  for (double t : terms) total += t;
  return checked_objective(total);
}

double max_abs_difference(const Matrix& a, const Matrix& b) noexcept {
  double worst = 0.0;
  const auto& x = a.data();
  const auto& y = b.data();
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    worst = std::max(worst, std::abs(x[static_cast<std::size_t>(k)] - y[static_cast<std::size_t>(k)]));
  }
  return worst;
}

}  // namespace parallel

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace fcmstop::kernels
