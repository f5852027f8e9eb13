#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "fcmstop/errors.hpp"
#include "fcmstop/fcm.hpp"
#include "fcmstop/rand_index.hpp"
#include "fcmstop/synthetic.hpp"

using namespace fcmstop;

TEST_CASE("config validation") {
  FcmConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.n_clusters == 6);
  CHECK(c.fuzzifier == 2.0);
  CHECK(c.epsilon == 0.005);
  c.n_clusters = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.fuzzifier = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.epsilon = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.max_iterations = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("init_membership is column stochastic and seeded") {
  const Matrix one = init_membership(1, 2, 42);
  CHECK(one(0, 0) + one(1, 0) == doctest::Approx(1.0).epsilon(1e-15));

  const Matrix u = init_membership(100, 6, 7);
  for (std::size_t i = 0; i < 100; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(u(j, i) > 0.0);
      s += u(j, i);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
  }
  CHECK(u == init_membership(100, 6, 7));
  CHECK_FALSE(u == init_membership(100, 6, 8));
  CHECK_THROWS_AS(init_membership(0, 2, 1), ConfigError);
  CHECK_THROWS_AS(init_membership(3, 1, 1), ConfigError);
}

TEST_CASE("center update") {
  const FeatureMatrix f(2, 1, {0.0, 2.0});
  CHECK(compute_centers(f, Matrix(1, 2, {1.0, 1.0}), 2.0)(0, 0) == 1.0);
  CHECK(compute_centers(f, Matrix(1, 2, {0.5, 0.5}), 2.0)(0, 0) == 1.0);
  const Matrix crisp = compute_centers(f, Matrix(2, 2, {1.0, 0.0, 0.0, 1.0}), 2.0);
  CHECK(crisp(0, 0) == 0.0);
  CHECK(crisp(1, 0) == 2.0);
}

TEST_CASE("membership update") {
  const FeatureMatrix x0(1, 1, {0.0});
  const Matrix u = update_memberships(x0, Matrix(2, 1, {1.0, 3.0}), 2.0);
  CHECK(u(0, 0) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(u(1, 0) == doctest::Approx(0.1).epsilon(1e-14));

  const Matrix eq = update_memberships(FeatureMatrix(1, 1, {1.0}), Matrix(2, 1, {0.0, 2.0}), 2.0);
  CHECK(eq(0, 0) == 0.5);
  CHECK(eq(1, 0) == 0.5);

  const Matrix at = update_memberships(FeatureMatrix(1, 2, {1.0, 1.0}), Matrix(3, 2, {1, 1, 2, 2, 5, 0}), 2.0);
  CHECK(at(0, 0) == 1.0);
  CHECK(at(1, 0) == 0.0);
  CHECK(at(2, 0) == 0.0);
}

TEST_CASE("objective") {
  CHECK(objective(FeatureMatrix(1, 1, {3.0}), {Matrix(1, 1, {1.0}), Matrix(1, 1, {3.0})}, 2.0) == 0.0);
  CHECK(objective(FeatureMatrix(2, 1, {0.0, 2.0}), {Matrix(1, 2, {1.0, 1.0}), Matrix(1, 1, {1.0})}, 2.0) == 2.0);
}

TEST_CASE("hard labels take the argmax, lowest index on ties") {
  CHECK(hard_labels(Matrix(3, 1, {0.6, 0.3, 0.1})) == Labels{0});
  CHECK(hard_labels(Matrix(2, 1, {0.5, 0.5})) == Labels{0});
  CHECK(hard_labels(Matrix(3, 1, {0.2, 0.4, 0.4})) == Labels{1});
  CHECK(hard_labels(Matrix(2, 3, {1, 0, 1, 0, 1, 0})) == Labels{0, 1, 0});
}

namespace {

// Best partition of 1-D points into k groups by exhaustive search over labelings.
Labels exhaustive_kmeans(const std::vector<double>& xs, std::size_t k) {
  const std::size_t n = xs.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k;
  double best = std::numeric_limits<double>::infinity();
  Labels best_labels(n);
  Labels labels(n);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < n; ++i, c /= k) labels[i] = static_cast<Label>(c % k);
    std::vector<double> sum(k, 0.0), cnt(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[labels[i]] += xs[i];
      cnt[labels[i]] += 1;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (cnt[labels[i]] == 0) continue;
      const double mean = sum[labels[i]] / cnt[labels[i]];
      sse += (xs[i] - mean) * (xs[i] - mean);
    }
    if (sse < best) {
      best = sse;
      best_labels = labels;
    }
  }
  return best_labels;
}

}  // namespace

TEST_CASE("three separated 1-D blobs match the exhaustive partition") {
  const std::vector<double> xs{0.0, 0.1, 0.2, 0.15, 5.0, 5.1, 4.9, 5.2, 10.0, 10.3, 9.8, 10.1};
  const Labels oracle = exhaustive_kmeans(xs, 3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    FcmConfig config;
    config.n_clusters = 3;
    config.seed = seed;
    const auto res = run_fcm(FeatureMatrix(xs.size(), 1, xs), config);
    CHECK(res.trace.converged);
    CHECK(rand_index_contingency(res.trace.labels.back(), oracle) == 1.0);
  }
}

TEST_CASE("always-stop predicate yields a trace of length two") {
  const auto blobs = synthetic::make_blobs({{0, 0}, {1, 1}}, 20, 0.8, 1);
  FcmConfig config;
  config.n_clusters = 4;
  config.epsilon = 1e-9;
  std::size_t calls = 0;
  const auto res = run_fcm(blobs.features, config, [&](const ClusterTrace&) {
    ++calls;
    return true;
  });
  CHECK(res.trace.n_iterations() == 2);
  CHECK(calls == 1);
  CHECK_FALSE(res.trace.converged);
}

TEST_CASE("runs are deterministic and descend") {
  const auto blobs = synthetic::make_blobs({{0, 0, 0}, {2, 0, 1}, {0, 2, 2}}, 60, 0.6, 9);
  for (InitMethod init : {InitMethod::seeded_centers, InitMethod::dirichlet}) {
    FcmConfig config;
    config.n_clusters = 3;
    config.seed = 17;
    config.init = init;
    const RunOptions opts{Backend::parallel, TimingMode::modeled};
    const auto a = run_fcm(blobs.features, config, {}, opts);
    const auto b = run_fcm(blobs.features, config, {}, opts);
    CHECK(a.trace.objectives == b.trace.objectives);
    CHECK(a.trace.labels == b.trace.labels);
    CHECK(a.trace.iter_times == b.trace.iter_times);
    for (std::size_t m = 1; m < a.trace.objectives.size(); ++m) {
      CHECK(a.trace.objectives[m] <= a.trace.objectives[m - 1] * (1 + 1e-9));
    }
    CHECK(a.trace.labels.size() == a.trace.n_iterations());
    CHECK(a.trace.iter_times.size() == a.trace.n_iterations());
  }
}

TEST_CASE("iteration cap ends an unconverged run") {
  const auto blobs = synthetic::make_blobs({{0, 0}, {1, 1}}, 50, 0.8, 4);
  FcmConfig config;
  config.n_clusters = 5;
  config.epsilon = 1e-12;
  config.max_iterations = 4;
  const auto res = run_fcm(blobs.features, config);
  CHECK(res.trace.n_iterations() == 4);
  CHECK_FALSE(res.trace.converged);
}

TEST_CASE("modeled timing charges a fixed cost per iteration") {
  CHECK(modeled_iteration_seconds(1000, 6, 3) == doctest::Approx(1000 * 6 * 17 * 1e-9));
  const auto blobs = synthetic::make_blobs({{0}, {4}}, 30, 0.5, 2);
  FcmConfig config;
  config.n_clusters = 2;
  const auto res = run_fcm(blobs.features, config, {}, {Backend::serial, TimingMode::modeled});
  for (double t : res.trace.iter_times) CHECK(t == modeled_iteration_seconds(60, 2, 1));
}
