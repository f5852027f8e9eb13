#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "fcmstop/errors.hpp"
#include "fcmstop/regression.hpp"
#include "support/oracles.hpp"

using namespace fcmstop;

TEST_CASE("rbf kernel") {
  CHECK(rbf_kernel(0.3, 0.3, 2.0) == 1.0);
  CHECK(rbf_kernel(0.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
  const std::vector<double> a{0.0, 0.0}, b{1.0, 1.0};
  CHECK(rbf_kernel(a, b, 0.5) == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("scale gamma") {
  const std::vector<double> xs{0.0, 2.0};
  CHECK(scale_gamma(xs) == doctest::Approx(1.0));
  CHECK(scale_gamma(std::vector<double>{3.0, 3.0}) == 1.0);
}

TEST_CASE("hyperparameter validation") {
  SvrHyperparams hp;
  CHECK_NOTHROW(hp.validate());
  hp.c = 0.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = {};
  hp.epsilon_tube = -1.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = {};
  hp.gamma = 0.0;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
}

TEST_CASE("constant target sits inside the tube") {
  const std::vector<double> xs{0, 0.1, 0.3, 0.5, 0.9, 1.0};
  const std::vector<double> ys(xs.size(), 5.0);
  SvrHyperparams hp;
  hp.c = 10.0;
  const SvrModel m = fit_svr(xs, ys, hp);
  for (double x = 0.0; x <= 1.0; x += 0.05) CHECK(std::abs(m(x) - 5.0) <= hp.epsilon_tube + 1e-9);
}

TEST_CASE("empty expansion predicts the bias") {
  SvrModel m;
  m.bias = 1.25;
  CHECK(m.predict(3.0) == 1.25);
  CHECK(predict_svr(m, -7.0) == 1.25);
}

TEST_CASE("smooth noise-free samples are fitted closely") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 30; ++i) {
    const double x = i / 29.0;
    xs.push_back(x);
    ys.push_back(std::tanh(3.0 * x - 1.0));
  }
  SvrHyperparams hp;
  hp.c = 10.0;
  const SvrModel m = fit_svr(xs, ys, hp);
  CHECK(m.converged);
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) sse += (m(xs[i]) - ys[i]) * (m(xs[i]) - ys[i]);
  CHECK(std::sqrt(sse / 30.0) <= hp.epsilon_tube + 0.05);
  for (std::size_t i = 0; i < m.support_inputs.size(); ++i) {
    const auto it = std::find(xs.begin(), xs.end(), m.support_inputs[i]);
    const double y = ys[static_cast<std::size_t>(it - xs.begin())];
    CHECK(std::abs(m(m.support_inputs[i]) - y) <= hp.epsilon_tube + hp.tolerance + 1e-6);
  }
}

TEST_CASE("dual coefficients are feasible") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> xs(40), ys(40);
    for (std::size_t i = 0; i < 40; ++i) {
      xs[i] = g(rng);
      ys[i] = std::sin(xs[i]) + 0.3 * g(rng);
    }
    SvrHyperparams hp;
    hp.c = 0.5 + (t % 4);
    const SvrModel m = fit_svr(xs, ys, hp);
    double sum = 0.0;
    for (double b : m.dual_coeffs) {
      CHECK(std::abs(b) <= hp.c);
      sum += b;
    }
    CHECK(std::abs(sum) <= 1e-9);
  }
}

TEST_CASE("dual objective matches a projected-gradient solver") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 8);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = u(rng);
      ys[i] = xs[i] * xs[i] - 1.0 + 0.2 * u(rng);
    }
    SvrHyperparams hp;
    hp.c = t % 2 == 0 ? 1.0 : 0.3;
    hp.epsilon_tube = 0.05;
    hp.tolerance = 1e-6;
    hp.max_passes = 2000;
    const SvrModel m = fit_svr(xs, ys, hp);
    const auto beta = oracle::svr_dual(xs, ys, hp.c, hp.epsilon_tube, m.gamma);
    const double reference = svr_dual_objective(xs, ys, beta, m.gamma, hp.epsilon_tube);
    CHECK(std::abs(m.dual_objective - reference) <= 1e-4);
  }
}

TEST_CASE("svr input checks") {
  SvrHyperparams hp;
  CHECK_THROWS_AS(fit_svr(std::vector<double>{1.0}, std::vector<double>{1.0}, hp), InputError);
  CHECK_THROWS_AS(fit_svr(std::vector<double>{1.0, NAN}, std::vector<double>{1.0, 2.0}, hp), InputError);
}

TEST_CASE("linear baseline") {
  const LinearModel exact = fit_linear(std::vector<double>{0, 1}, std::vector<double>{0, 2});
  CHECK(exact.slope == doctest::Approx(2.0));
  CHECK(exact.intercept == doctest::Approx(0.0));
  CHECK(predict_linear(exact, 3.0) == doctest::Approx(6.0));
  CHECK(fit_linear(std::vector<double>{0, 1, 2}, std::vector<double>{4, 4, 4}).slope == 0.0);
  CHECK_THROWS_AS(fit_linear(std::vector<double>{1, 1, 1}, std::vector<double>{0, 1, 2}), DegenerateFitError);
}

TEST_CASE("noisy line recovers coefficients within three standard errors") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 0.5);
  std::vector<double> xs(100), ys(100);
  for (std::size_t i = 0; i < 100; ++i) {
    xs[i] = static_cast<double>(i) / 10.0;
    ys[i] = 1.5 * xs[i] - 2.0 + g(rng);
  }
  const LinearModel fit = fit_linear(xs, ys);
  const auto ref = oracle::ols(xs, ys);
  CHECK(fit.slope == doctest::Approx(ref.slope).epsilon(1e-10));
  CHECK(fit.intercept == doctest::Approx(ref.intercept).epsilon(1e-10));

  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / 100.0;
  double sxx = 0.0, rss = 0.0;
  for (std::size_t i = 0; i < 100; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    const double r = ys[i] - predict_linear(fit, xs[i]);
    rss += r * r;
  }
  const double s2 = rss / 98.0;
  const double se_slope = std::sqrt(s2 / sxx);
  const double se_intercept = std::sqrt(s2 * (1.0 / 100.0 + mx * mx / sxx));
  CHECK(std::abs(fit.slope - 1.5) <= 3 * se_slope);
  CHECK(std::abs(fit.intercept + 2.0) <= 3 * se_intercept);
}
