#include "fcmstop/fcm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "fcmstop/errors.hpp"
#include "fcmstop/kernels.hpp"

namespace fcmstop {

void FcmConfig::validate() const {
  if (n_clusters < 2) throw ConfigError("n_clusters must be >= 2");
  if (n_clusters > std::numeric_limits<Label>::max()) throw ConfigError("n_clusters exceeds label range");
  if (!(fuzzifier > 1.0) || !std::isfinite(fuzzifier)) throw ConfigError("fuzzifier must be > 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (max_iterations < 2) throw ConfigError("max_iterations must be >= 2");
}

double ClusterTrace::total_time() const noexcept {
  double total = 0.0;
  for (double t : iter_times) total += t;
  return total;
}

Matrix init_membership(std::size_t n_points, std::size_t n_clusters, std::uint64_t seed) {
  if (n_points < 1) throw ConfigError("init_membership: n_points must be >= 1");
  if (n_clusters < 2) throw ConfigError("init_membership: n_clusters must be >= 2");

  std::mt19937_64 rng(seed);
  // Open interval (0, 1] so -log never sees 0.
  auto uniform_open = [&rng] {
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };

  Matrix u(n_clusters, n_points);
  std::vector<double> draw(n_clusters);
  for (std::size_t i = 0; i < n_points; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < n_clusters; ++j) {
      // Exp(1) draws; a flat Dirichlet is their normalization. Floor keeps entries > 0.
      draw[j] = std::max(-std::log(uniform_open()), 1e-300);
      total += draw[j];
    }
    for (std::size_t j = 0; j < n_clusters; ++j) u(j, i) = draw[j] / total;
  }
  return u;
}

Matrix seed_centers(const FeatureMatrix& features, std::size_t n_clusters, std::uint64_t seed) {
  if (n_clusters < 2) throw ConfigError("seed_centers: n_clusters must be >= 2");
  const std::size_t n = features.n_points();
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  Matrix centers(n_clusters, features.n_dims());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t chosen = std::min<std::size_t>(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  for (std::size_t j = 0; j < n_clusters; ++j) {
    const auto x = features.point(chosen);
    std::copy(x.begin(), x.end(), centers.row(j).begin());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], kernels::squared_distance(features.point(i), centers.row(j)));
      total += nearest[i];
    }
    if (j + 1 == n_clusters) break;
    if (!(total > 0.0)) {
      // Every point already coincides with a center; reuse in index order.
      chosen = (j + 1) % n;
      continue;
    }
    const double target = uniform() * total;
    double running = 0.0;
    chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      running += nearest[i];
      if (running > target && nearest[i] > 0.0) {
        chosen = i;
        break;
      }
    }
  }
  return centers;
}

Matrix initial_memberships(const FeatureMatrix& features, const FcmConfig& config) {
  if (config.init == InitMethod::dirichlet) return init_membership(features.n_points(), config.n_clusters, config.seed);
  const Matrix centers = seed_centers(features, config.n_clusters, config.seed);
  Matrix u;
  kernels::serial::update_memberships(features, centers, config.fuzzifier, u);
  return u;
}

Matrix compute_centers(const FeatureMatrix& features, const Matrix& memberships, double fuzzifier) {
  if (memberships.cols() != features.n_points()) throw InputError("compute_centers: membership/feature size mismatch");
  Matrix centers;
  kernels::serial::compute_centers(features, memberships, fuzzifier, centers);
  return centers;
}

Matrix update_memberships(const FeatureMatrix& features, const Matrix& centers, double fuzzifier) {
  if (centers.cols() != features.n_dims()) throw InputError("update_memberships: center dimension mismatch");
  Matrix u;
  kernels::serial::update_memberships(features, centers, fuzzifier, u);
  return u;
}

double objective(const FeatureMatrix& features, const FuzzyState& state, double fuzzifier) {
  return kernels::serial::objective(features, state.memberships, state.centers, fuzzifier);
}

Labels hard_labels(const Matrix& memberships) {
  Labels labels(memberships.cols(), 0);
  for (std::size_t i = 0; i < memberships.cols(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < memberships.rows(); ++j) {
      if (memberships(j, i) > memberships(best, i)) best = j;
    }
    labels[i] = static_cast<Label>(best);
  }
  return labels;
}

double modeled_iteration_seconds(std::size_t n_points, std::size_t n_clusters, std::size_t n_dims) noexcept {
  // Roughly the flop count of one iteration (distances, powers, center sums)
  // at a nominal 1 GFLOP/s.
  const double ops = static_cast<double>(n_points) * static_cast<double>(n_clusters) *
                     (3.0 * static_cast<double>(n_dims) + 8.0);
  return ops * 1e-9;
}

FcmResult run_fcm(const FeatureMatrix& features, const FcmConfig& config, const StopPredicate& stop,
                  const RunOptions& options) {
  config.validate();
  using Clock = std::chrono::steady_clock;

  const bool parallel = options.backend == Backend::parallel;
  const double modeled =
      modeled_iteration_seconds(features.n_points(), config.n_clusters, features.n_dims());

  FcmResult result;
  auto& trace = result.trace;
  Matrix previous = initial_memberships(features, config);
  Matrix centers;
  Matrix current;

  for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
    const auto started = Clock::now();
    double objective_value = 0.0;
    double change = 0.0;
    if (parallel) {
      kernels::parallel::compute_centers(features, previous, config.fuzzifier, centers);
      kernels::parallel::update_memberships(features, centers, config.fuzzifier, current);
      objective_value = kernels::parallel::objective(features, current, centers, config.fuzzifier);
      change = kernels::parallel::max_abs_difference(current, previous);
    } else {
      kernels::serial::compute_centers(features, previous, config.fuzzifier, centers);
      kernels::serial::update_memberships(features, centers, config.fuzzifier, current);
      objective_value = kernels::serial::objective(features, current, centers, config.fuzzifier);
      change = kernels::serial::max_abs_difference(current, previous);
    }
    trace.objectives.push_back(objective_value);
    trace.labels.push_back(hard_labels(current));
    const std::chrono::duration<double> elapsed = Clock::now() - started;
    trace.iter_times.push_back(options.timing == TimingMode::wall ? elapsed.count() : modeled);

    std::swap(previous, current);
    if (iteration < 2) continue;
    if (change < config.epsilon) {
      trace.converged = true;
      break;
    }
    if (stop && stop(trace)) break;
  }

  result.state.memberships = std::move(previous);
  result.state.centers = std::move(centers);
  return result;
}

}  // namespace fcmstop
