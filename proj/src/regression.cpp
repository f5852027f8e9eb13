#include "fcmstop/regression.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fcmstop/errors.hpp"
#include "fcmstop/matrix.hpp"

namespace fcmstop {

void SvrHyperparams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("SVR c must be > 0");
  if (!(epsilon_tube >= 0.0) || !std::isfinite(epsilon_tube)) throw ConfigError("SVR epsilon_tube must be >= 0");
  if (gamma && !(*gamma > 0.0 && std::isfinite(*gamma))) throw ConfigError("SVR gamma must be > 0");
  if (!(tolerance > 0.0)) throw ConfigError("SVR tolerance must be > 0");
  if (max_passes < 1) throw ConfigError("SVR max_passes must be >= 1");
}

double rbf_kernel(double x, double y, double gamma) noexcept {
  const double d = x - y;
  return std::exp(-gamma * d * d);
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) noexcept {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    acc += d * d;
  }
  return std::exp(-gamma * acc);
}

double scale_gamma(std::span<const double> xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return var > 0.0 ? 1.0 / var : 1.0;
}

double SvrModel::predict(double x) const {
  double acc = bias;
  for (std::size_t i = 0; i < support_inputs.size(); ++i) acc += dual_coeffs[i] * rbf_kernel(support_inputs[i], x, gamma);
  return acc;
}

double svr_dual_objective(std::span<const double> xs, std::span<const double> ys, std::span<const double> coeffs,
                          double gamma, double epsilon_tube) {
  double quad = 0.0;
  double linear = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (coeffs[i] == 0.0) continue;
    for (std::size_t j = 0; j < xs.size(); ++j) quad += coeffs[i] * coeffs[j] * rbf_kernel(xs[i], xs[j], gamma);
    linear += -ys[i] * coeffs[i] + epsilon_tube * std::abs(coeffs[i]);
  }
  return 0.5 * quad + linear;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solver state over coefficients beta_i = alpha_i - alpha_i* with |beta_i| <= c
// and sum beta_i = 0. `f` caches sum_k beta_k K(i, k) (no bias).
class SmoSolver {
 public:
  SmoSolver(std::span<const double> xs, std::span<const double> ys, const SvrHyperparams& hp, double gamma)
      : n_(xs.size()), ys_(ys), c_(hp.c), eps_(hp.epsilon_tube), kernel_(n_, n_), beta_(n_, 0.0), f_(n_, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j) kernel_(i, j) = kernel_(j, i) = rbf_kernel(xs[i], xs[j], gamma);
    }
  }

  // Interval [lo, hi] of bias values consistent with point i's KKT conditions.
  double lower(std::size_t i) const noexcept {
    const double r = ys_[i] - f_[i];
    if (at_upper(i)) return -kInf;
    if (beta_[i] > 0.0) return r - eps_;
    return r + (beta_[i] < 0.0 ? eps_ : -eps_);
  }
  double upper(std::size_t i) const noexcept {
    const double r = ys_[i] - f_[i];
    if (at_lower(i)) return kInf;
    if (beta_[i] < 0.0) return r + eps_;
    return r - (beta_[i] > 0.0 ? eps_ : -eps_);
  }

  double gap() const noexcept {
    double max_lo = -kInf;
    double min_hi = kInf;
    for (std::size_t i = 0; i < n_; ++i) {
      max_lo = std::max(max_lo, lower(i));
      min_hi = std::min(min_hi, upper(i));
    }
    return max_lo - min_hi;
  }

  double violation(std::size_t i, std::size_t j) const noexcept {
    return std::max(lower(i) - upper(j), lower(j) - upper(i));
  }

  // Partner of i with the largest pair violation; first index wins ties.
  std::size_t best_partner(std::size_t i) const noexcept {
    std::size_t best = i;
    double best_violation = -kInf;
    for (std::size_t j = 0; j < n_; ++j) {
      if (j == i) continue;
      const double v = violation(i, j);
      if (v > best_violation) {
        best_violation = v;
        best = j;
      }
    }
    return best;
  }

  // Exact minimization of the dual along beta_i += t, beta_j -= t.
  bool optimize_pair(std::size_t i, std::size_t j) {
    const double eta = kernel_(i, i) + kernel_(j, j) - 2.0 * kernel_(i, j);
    const double g = (f_[i] - ys_[i]) - (f_[j] - ys_[j]);
    const double lo = std::max(-c_ - beta_[i], beta_[j] - c_);
    const double hi = std::min(c_ - beta_[i], beta_[j] + c_);
    if (!(hi > lo)) return false;

    auto phi = [&](double t) {
      return 0.5 * eta * t * t + g * t + eps_ * (std::abs(beta_[i] + t) + std::abs(beta_[j] - t));
    };

    std::array<double, 8> candidates{};
    std::size_t n_candidates = 0;
    candidates[n_candidates++] = lo;
    candidates[n_candidates++] = hi;
    candidates[n_candidates++] = std::clamp(-beta_[i], lo, hi);
    candidates[n_candidates++] = std::clamp(beta_[j], lo, hi);
    if (eta > 1e-12) {
      for (double s : {-2.0, 0.0, 2.0}) candidates[n_candidates++] = std::clamp(-(g + eps_ * s) / eta, lo, hi);
    }

    double best_t = 0.0;
    double best_phi = phi(0.0);
    const double start_phi = best_phi;
    for (std::size_t k = 0; k < n_candidates; ++k) {
      const double value = phi(candidates[k]);
      if (value < best_phi) {
        best_phi = value;
        best_t = candidates[k];
      }
    }
    if (best_t == 0.0 || !(start_phi - best_phi > 1e-15 * std::max(1.0, std::abs(start_phi)))) return false;

    beta_[i] = snap(beta_[i] + best_t);
    beta_[j] = snap(beta_[j] - best_t);
    for (std::size_t k = 0; k < n_; ++k) f_[k] += best_t * (kernel_(k, i) - kernel_(k, j));
    return true;
  }

  double bias() const noexcept {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double max_lo = -kInf;
    double min_hi = kInf;
    for (std::size_t i = 0; i < n_; ++i) {
      const double lo = lower(i);
      const double hi = upper(i);
      if (beta_[i] != 0.0 && !at_upper(i) && !at_lower(i)) {
        free_sum += lo;
        ++free_count;
      }
      max_lo = std::max(max_lo, lo);
      min_hi = std::min(min_hi, hi);
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    if (std::isfinite(max_lo) && std::isfinite(min_hi)) return 0.5 * (max_lo + min_hi);
    return std::isfinite(max_lo) ? max_lo : min_hi;
  }

  std::size_t size() const noexcept { return n_; }
  const std::vector<double>& beta() const noexcept { return beta_; }

 private:
  bool at_upper(std::size_t i) const noexcept { return beta_[i] >= c_; }
  bool at_lower(std::size_t i) const noexcept { return beta_[i] <= -c_; }

  // Pin values that round to the box edges or to zero so KKT classification is exact.
  double snap(double b) const noexcept {
    const double tiny = 1e-12 * c_;
    if (b >= c_ - tiny) return c_;
    if (b <= -c_ + tiny) return -c_;
    if (std::abs(b) < tiny) return 0.0;
    return b;
  }

  std::size_t n_;
  std::span<const double> ys_;
  double c_;
  double eps_;
  Matrix kernel_;
  std::vector<double> beta_;
  std::vector<double> f_;
};

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

SvrModel fit_svr(std::span<const double> xs, std::span<const double> ys, const SvrHyperparams& hp) {
  hp.validate();
  if (xs.size() != ys.size()) throw InputError("fit_svr: xs and ys differ in length");
  if (xs.size() < 2) throw InputError("fit_svr needs at least 2 samples");
  check_finite(xs, "fit_svr xs");
  check_finite(ys, "fit_svr ys");

  const double gamma = hp.gamma.value_or(scale_gamma(xs));
  SmoSolver solver(xs, ys, hp, gamma);

  std::size_t passes = 0;
  double gap = solver.gap();
  while (passes < hp.max_passes && gap > hp.tolerance) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < solver.size(); ++i) {
      const std::size_t j = solver.best_partner(i);
      if (solver.violation(i, j) <= hp.tolerance) continue;
      if (solver.optimize_pair(i, j)) ++changed;
    }
    ++passes;
    gap = solver.gap();
    if (changed == 0) break;
  }

  SvrModel model;
  model.gamma = gamma;
  model.bias = solver.bias();
  model.passes = passes;
  model.kkt_gap = gap;
  model.converged = gap <= hp.tolerance;
  model.dual_objective = svr_dual_objective(xs, ys, solver.beta(), gamma, hp.epsilon_tube);
  for (std::size_t i = 0; i < solver.size(); ++i) {
    if (solver.beta()[i] == 0.0) continue;
    model.support_inputs.push_back(xs[i]);
    model.dual_coeffs.push_back(solver.beta()[i]);
  }
  return model;
}

LinearModel fit_linear(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("fit_linear: xs and ys differ in length");
  if (xs.size() < 2) throw DegenerateFitError("fit_linear needs at least 2 samples");
  check_finite(xs, "fit_linear xs");
  check_finite(ys, "fit_linear ys");

  const double n = static_cast<double>(xs.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw DegenerateFitError("fit_linear: all inputs are identical");
  LinearModel model;
  model.slope = sxy / sxx;
  model.intercept = mean_y - model.slope * mean_x;
  return model;
}

}  // namespace fcmstop
