#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fcmstop {

/// Epsilon-SVR settings. `gamma` unset means "scale": 1 / (d * var(x)).
struct SvrHyperparams {
  double c = 1.0;
  double epsilon_tube = 0.01;
  std::optional<double> gamma;
  double tolerance = 1e-3;
  std::size_t max_passes = 200;

  void validate() const;

  friend bool operator==(const SvrHyperparams&, const SvrHyperparams&) = default;
};

/// Fitted kernel expansion f(x) = sum_i coeff_i * k(s_i, x) + bias.
struct SvrModel {
  std::vector<double> support_inputs;
  std::vector<double> dual_coeffs;  ///< alpha_i - alpha_i*, each within [-c, c]
  double bias = 0.0;
  double gamma = 1.0;
  bool converged = true;

  // Fit diagnostics; not part of the persisted form.
  std::size_t passes = 0;
  double kkt_gap = 0.0;
  double dual_objective = 0.0;

  double operator()(double x) const { return predict(x); }
  double predict(double x) const;
};

double rbf_kernel(double x, double y, double gamma) noexcept;
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) noexcept;

/// Resolves gamma="scale" for 1-D inputs (1 when the inputs have no spread).
double scale_gamma(std::span<const double> xs);

/// Epsilon-insensitive SVR with RBF kernel, solved by sequential minimal
/// optimization over pairs of dual coefficients. Throws InputError on
/// fewer than 2 samples or non-finite values. If the KKT gap is still above
/// tolerance after max_passes the best iterate is returned with
/// `converged = false`.
SvrModel fit_svr(std::span<const double> xs, std::span<const double> ys, const SvrHyperparams& hp);

inline double predict_svr(const SvrModel& model, double x) { return model.predict(x); }

/// Epsilon-SVR dual objective 1/2 b'Kb - y'b + eps*|b|_1 for coefficients b.
double svr_dual_objective(std::span<const double> xs, std::span<const double> ys, std::span<const double> coeffs,
                          double gamma, double epsilon_tube);

struct LinearModel {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares. Throws DegenerateFitError when every x is equal.
LinearModel fit_linear(std::span<const double> xs, std::span<const double> ys);

inline double predict_linear(const LinearModel& model, double x) noexcept { return model.slope * x + model.intercept; }

}  // namespace fcmstop
