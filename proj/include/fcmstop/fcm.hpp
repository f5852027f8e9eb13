#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fcmstop/feature_matrix.hpp"
#include "fcmstop/matrix.hpp"

namespace fcmstop {

using Label = std::uint16_t;
using Labels = std::vector<Label>;

/// How U^0 is produced.
///  - seeded_centers: k-means++ (D^2) sampling of initial centers from the
///    data, memberships from the update rule.
///  - dirichlet: every column an independent flat-Dirichlet draw.
enum class InitMethod { seeded_centers, dirichlet };

/// Fuzzy c-means parameters: 6 clusters, m = 2, termination at max |dU| < 0.005 by default.
struct FcmConfig {
  std::size_t n_clusters = 6;
  double fuzzifier = 2.0;
  double epsilon = 0.005;
  std::size_t max_iterations = 300;
  std::uint64_t seed = 0;
  InitMethod init = InitMethod::seeded_centers;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  friend bool operator==(const FcmConfig&, const FcmConfig&) = default;
};

/// Memberships (C x N, each column sums to 1) and centers (C x d).
struct FuzzyState {
  Matrix memberships;
  Matrix centers;
};

/// Per-iteration record of one clustering run. Entry k describes iteration k+1.
struct ClusterTrace {
  std::vector<double> objectives;
  std::vector<Labels> labels;
  std::vector<double> iter_times;
  bool converged = false;

  std::size_t n_iterations() const noexcept { return objectives.size(); }
  double total_time() const noexcept;
};

/// Kernel implementation used by run_fcm.
enum class Backend { serial, parallel };

/// How iteration durations are measured.
///  - wall: steady-clock seconds.
///  - modeled: a fixed cost per iteration proportional to N*C*d, so traces
///    (and everything derived from them) are reproducible byte-for-byte.
enum class TimingMode { wall, modeled };

struct RunOptions {
  Backend backend = Backend::parallel;
  TimingMode timing = TimingMode::wall;
};

/// Called after every iteration from the second onward; returning true stops the run.
using StopPredicate = std::function<bool(const ClusterTrace&)>;

/// Column-stochastic C x N matrix; each column is a flat-Dirichlet draw.
Matrix init_membership(std::size_t n_points, std::size_t n_clusters, std::uint64_t seed);

/// k-means++ center seeding: first center uniform, each next one drawn with
/// probability proportional to the squared distance to the nearest chosen center.
Matrix seed_centers(const FeatureMatrix& features, std::size_t n_clusters, std::uint64_t seed);

/// U^0 for `config.init`.
Matrix initial_memberships(const FeatureMatrix& features, const FcmConfig& config);

Matrix compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier);

Matrix update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier);

/// J = sum_i sum_j u_ij^m |x_i - c_j|^2.
double objective(const FeatureMatrix& features, const FuzzyState& state, double fuzzifier);

/// Argmax over clusters per point; ties go to the lowest cluster index.
Labels hard_labels(const Matrix& memberships);

struct FcmResult {
  FuzzyState state;
  ClusterTrace trace;
};

/// Alternates center and membership updates until max |U(k) - U(k-1)| < epsilon,
/// max_iterations, or `stop` returns true.
FcmResult run_fcm(const FeatureMatrix& features, const FcmConfig& config, const StopPredicate& stop = {},
                  const RunOptions& options = {});

/// Deterministic per-iteration duration charged under TimingMode::modeled.
double modeled_iteration_seconds(std::size_t n_points, std::size_t n_clusters, std::size_t n_dims) noexcept;

}  // namespace fcmstop
