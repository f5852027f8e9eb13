#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "fcmstop/errors.hpp"
#include "fcmstop/lof.hpp"
#include "support/oracles.hpp"

using namespace fcmstop;

TEST_CASE("regular grid interior scores are near one") {
  std::vector<double> v;
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 5; ++x) {
      v.push_back(x);
      v.push_back(y);
    }
  }
  const Matrix pts(25, 2, v);
  const auto s = lof_scores(pts, 4);
  const auto o = oracle::lof(pts, 4);
  for (int y = 1; y < 4; ++y) {
    for (int x = 1; x < 4; ++x) {
      const auto i = static_cast<std::size_t>(y * 5 + x);
      CHECK(s[i] >= 0.9);
      CHECK(s[i] <= 1.1);
    }
  }
  for (std::size_t i = 0; i < 25; ++i) CHECK(s[i] == doctest::Approx(o[i]).epsilon(1e-12));
}

TEST_CASE("a far point has the strictly largest score") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 0.5);
  std::vector<double> v;
  for (int i = 0; i < 10; ++i) {
    v.push_back(g(rng));
    v.push_back(g(rng));
  }
  v.push_back(100.0);
  v.push_back(0.0);
  const auto s = lof_scores(Matrix(11, 2, v), 3);
  for (std::size_t i = 0; i < 10; ++i) CHECK(s[10] > s[i]);
  CHECK(s[10] > 1.5);
}

TEST_CASE("duplicates hit the density cap without failing") {
  const Matrix pts(6, 1, {0, 0, 0, 0, 5, 6});
  const auto s = lof_scores(pts, 2);
  for (double v : s) CHECK(std::isfinite(v));
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[4] > 1.0);
}

TEST_CASE("lof input checks") {
  CHECK_THROWS_AS(lof_scores(Matrix(3, 1, {0, 1, 2}), 3), InputError);
  CHECK_THROWS_AS(lof_scores(Matrix(3, 1, {0, 1, 2}), 0), InputError);
  LofConfig c;
  CHECK_THROWS_AS(c.validate(40), ConfigError);
  CHECK_NOTHROW(c.validate(41));
}

TEST_CASE("outlier counts use the ceiling") {
  CHECK(outlier_count(100, 0.03) == 3);
  CHECK(outlier_count(10, 0.03) == 1);
  CHECK(outlier_count(200, 0.03) == 6);
  CHECK(outlier_count(1, 0.5) == 1);
}

TEST_CASE("planted anomalies are exactly the removed points") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v;
  for (int i = 0; i < 97; ++i) {
    v.push_back(g(rng));
    v.push_back(g(rng));
  }
  const Matrix base(97, 2, v);
  // Insert the anomalies at fixed positions.
  std::vector<double> all;
  const std::vector<std::size_t> planted{5, 40, 99};
  std::size_t next = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    if (std::find(planted.begin(), planted.end(), i) != planted.end()) {
      all.push_back(50.0 + static_cast<double>(i));
      all.push_back(-60.0 * static_cast<double>(i % 3 + 1));
    } else {
      all.push_back(base(next, 0));
      all.push_back(base(next, 1));
      ++next;
    }
  }
  const Matrix pts(100, 2, all);
  const auto split = remove_outliers(pts, lof_scores(pts, 10), 0.03);
  CHECK(split.removed == planted);
  CHECK(split.kept.rows() == 97);
  CHECK(split.kept_indices.size() == 97);
  CHECK(split.kept(0, 0) == pts(0, 0));
}

TEST_CASE("ties are broken toward the lower index") {
  const Matrix pts(4, 1, {0, 1, 2, 3});
  const auto split = remove_outliers(pts, {2.0, 5.0, 5.0, 1.0}, 0.25);
  CHECK(split.removed == std::vector<std::size_t>{1});
  CHECK_THROWS_AS(remove_outliers(pts, {1, 1, 1, 1}, 0.99), InputError);
}

TEST_CASE("scores match a brute-force LOF on random sets") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 8 + rng() % 43;
    const std::size_t d = 1 + rng() % 3;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(10, n - 2);
    std::vector<double> v(n * d);
    for (double& x : v) x = u(rng);
    const Matrix pts(n, d, v);
    const auto s = lof_scores(pts, k);
    const auto o = oracle::lof(pts, k);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(s[i] - o[i]) <= 1e-9);
  }
}
