#pragma once

// Inner loops of one fuzzy c-means iteration.
//
// `serial` is the reference implementation. `parallel` distributes the same
// per-point (or per-cluster) work over OpenMP threads; every reduction keeps
// the serial summation order, so both produce bit-identical results.
//
// Layouts: features N x d, memberships C x N, centers C x d (all row-major).

#include <cmath>
#include <cstdint>
#include <span>

#include "fcmstop/feature_matrix.hpp"
#include "fcmstop/matrix.hpp"

namespace fcmstop::kernels {

/// Distances below this are treated as coincidence with a center.
inline constexpr double kCoincidentDistance = 1e-12;
/// Cluster weight sum below which a center is undefined.
inline constexpr double kDegenerateWeight = 1e-300;

/// u^m, exact multiplication for the common m = 2.
inline double membership_power(double u, double fuzzifier) noexcept {
  return fuzzifier == 2.0 ? u * u : std::pow(u, fuzzifier);
}

/// Squared Euclidean distance.
inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

/// Membership column for one point given its squared distances to all centers.
void membership_column(std::span<const double> sq_dist, double fuzzifier, std::span<double> out) noexcept;

namespace serial {

/// Writes into `centers` (C x d). Throws DegenerateClusterError.
void compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier, Matrix& centers);
void update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier, Matrix& memberships);
double objective(const FeatureMatrix& features, const Matrix& memberships, const Matrix& centers, double fuzzifier);
double max_abs_difference(const Matrix& a, const Matrix& b) noexcept;

}  // namespace serial

namespace parallel {

void compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier, Matrix& centers);
void update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier, Matrix& memberships);
double objective(const FeatureMatrix& features, const Matrix& memberships, const Matrix& centers, double fuzzifier);
double max_abs_difference(const Matrix& a, const Matrix& b) noexcept;

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels would use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace fcmstop::kernels
