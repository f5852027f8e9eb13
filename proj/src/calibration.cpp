#include "fcmstop/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fcmstop/errors.hpp"
#include "fcmstop/rand_index.hpp"

namespace fcmstop {

double change_rate(std::span<const double> objectives, std::size_t m) {
  if (m < 2 || m > objectives.size()) {
    throw InputError("change_rate: iteration " + std::to_string(m) + " outside [2, " +
                     std::to_string(objectives.size()) + "]");
  }
  const double previous = objectives[m - 2];
  if (previous == 0.0) return 0.0;
  return (previous - objectives[m - 1]) / previous;
}

double CalibrationModel::raw_threshold(double accuracy) const {
  const double x = (accuracy - scaler.means[0]) / scaler.stds[0];
  const double log_rate = regressor.predict(x) * scaler.stds[1] + scaler.means[1];
  return std::exp(log_rate);
}

std::vector<CalibrationPoint> calibration_points(const std::string& image_id, const ClusterTrace& trace) {
  const std::vector<double> accuracies = accuracy_trace(trace);
  std::vector<CalibrationPoint> points;
  points.reserve(trace.n_iterations() - 1);
  for (std::size_t m = 2; m <= trace.n_iterations(); ++m) {
    points.push_back({image_id, m, accuracies[m - 1], change_rate(trace.objectives, m)});
  }
  return points;
}

CalibrationHarvest collect_calibration_points(std::span<const ImageRecord> corpus, const FcmConfig& config,
                                              const CollectOptions& options) {
  if (corpus.empty()) throw CalibrationError("empty training corpus");
  config.validate();

  struct Slot {
    std::vector<CalibrationPoint> points;
    double seconds = 0.0;
    std::string error;
  };
  std::vector<Slot> slots(corpus.size());
  const auto n_images = static_cast<std::ptrdiff_t>(corpus.size());
  const int jobs = static_cast<int>(std::max<std::size_t>(1, options.jobs));

#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1) if (jobs > 1)
  for (std::ptrdiff_t idx = 0; idx < n_images; ++idx) {
    auto& slot = slots[static_cast<std::size_t>(idx)];
    const auto& image = corpus[static_cast<std::size_t>(idx)];
    try {
      const FcmResult run = run_fcm(image.features, config, {}, options.run);
      slot.points = calibration_points(image.id, run.trace);
      slot.seconds = run.trace.total_time();
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }

  CalibrationHarvest harvest;
  harvest.n_images = corpus.size();
  for (std::size_t idx = 0; idx < slots.size(); ++idx) {
    if (!slots[idx].error.empty()) {
      harvest.failures.push_back({corpus[idx].id, slots[idx].error});
      continue;
    }
    harvest.training_time_seconds += slots[idx].seconds;
    harvest.points.insert(harvest.points.end(), slots[idx].points.begin(), slots[idx].points.end());
  }
  if (harvest.failures.size() == corpus.size()) {
    throw CalibrationError("clustering failed on every training image (first: " + harvest.failures.front().message +
                           ")");
  }
  std::stable_sort(harvest.points.begin(), harvest.points.end(), [](const auto& a, const auto& b) {
    return a.image_id != b.image_id ? a.image_id < b.image_id : a.iteration < b.iteration;
  });
  return harvest;
}

namespace {

std::array<double, 2> column_stats(const Matrix& m, std::size_t col) {
  double mean = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, col);
  mean /= static_cast<double>(m.rows());
  double var = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) var += (m(i, col) - mean) * (m(i, col) - mean);
  var /= static_cast<double>(m.rows());
  return {mean, std::sqrt(var)};
}

}  // namespace

ThresholdFit fit_threshold_model(std::span<const CalibrationPoint> points, const LofConfig& lof,
                                 const SvrHyperparams& svr, std::span<const double> accuracy_grid) {
  svr.validate();
  if (accuracy_grid.empty()) throw ConfigError("accuracy grid is empty");
  for (double a : accuracy_grid) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("grid accuracy " + std::to_string(a) + " outside (0, 1)");
  }

  ThresholdFit fit;
  fit.n_points = points.size();
  std::vector<CalibrationPoint> positive;
  positive.reserve(points.size());
  for (const auto& p : points) {
    if (p.change_rate > 0.0 && std::isfinite(p.change_rate)) {
      positive.push_back(p);
    } else {
      ++fit.n_zero_rate;
    }
  }
  if (positive.size() < lof.n_neighbors + 1) {
    throw CalibrationError("only " + std::to_string(positive.size()) + " usable calibration points; need at least " +
                           std::to_string(lof.n_neighbors + 1));
  }
  lof.validate(positive.size());

  Matrix raw(positive.size(), 2);
  for (std::size_t i = 0; i < positive.size(); ++i) {
    raw(i, 0) = positive[i].accuracy;
    raw(i, 1) = std::log(positive[i].change_rate);
  }
  Scaler scaler;
  for (std::size_t col = 0; col < 2; ++col) {
    const auto [mean, sd] = column_stats(raw, col);
    if (!(sd > 0.0)) {
      throw CalibrationError(col == 0 ? "calibration accuracies have no spread"
                                      : "calibration change rates have no spread");
    }
    scaler.means[col] = mean;
    scaler.stds[col] = sd;
  }
  Matrix standardized = raw;
  for (std::size_t i = 0; i < standardized.rows(); ++i) {
    for (std::size_t col = 0; col < 2; ++col) {
      standardized(i, col) = (raw(i, col) - scaler.means[col]) / scaler.stds[col];
    }
  }

  const std::vector<double> scores = lof_scores(standardized, lof.n_neighbors);
  OutlierSplit split = remove_outliers(standardized, scores, lof.outliers_fraction);
  fit.removed = split.removed;

  std::vector<double> xs(split.kept.rows());
  std::vector<double> ys(split.kept.rows());
  for (std::size_t i = 0; i < split.kept.rows(); ++i) {
    xs[i] = split.kept(i, 0);
    ys[i] = split.kept(i, 1);
  }
  for (std::size_t idx : split.kept_indices) fit.used.push_back(positive[idx]);

  CalibrationModel& model = fit.model;
  model.scaler = scaler;
  model.regressor = fit_svr(xs, ys, svr);

  std::vector<double> grid(accuracy_grid.begin(), accuracy_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double a : grid) model.threshold_table.push_back({a, model.raw_threshold(a)});
  // Isotonic pass from the highest accuracy down.
  for (std::size_t k = model.threshold_table.size(); k-- > 1;) {
    auto& lower = model.threshold_table[k - 1].threshold;
    lower = std::max(lower, model.threshold_table[k].threshold);
  }
  for (const auto& entry : model.threshold_table) {
    if (!(entry.threshold > 0.0) || !std::isfinite(entry.threshold)) {
      throw CalibrationError("regressor produced an unusable threshold at accuracy " + std::to_string(entry.accuracy));
    }
  }
  return fit;
}

bool in_threshold_table(const CalibrationModel& model, double desired_accuracy) {
  return std::any_of(model.threshold_table.begin(), model.threshold_table.end(),
                     [&](const ThresholdEntry& e) { return e.accuracy == desired_accuracy; });
}

double threshold_for(const CalibrationModel& model, double desired_accuracy) {
  if (!(desired_accuracy > 0.0 && desired_accuracy < 1.0)) {
    throw InputError("desired accuracy " + std::to_string(desired_accuracy) + " outside (0, 1)");
  }
  const auto& table = model.threshold_table;
  const ThresholdEntry* below = nullptr;
  const ThresholdEntry* above = nullptr;
  for (const auto& entry : table) {
    if (entry.accuracy == desired_accuracy) return entry.threshold;
    if (entry.accuracy < desired_accuracy) below = &entry;
    if (entry.accuracy > desired_accuracy && above == nullptr) above = &entry;
  }

  const double stop = above != nullptr ? above->accuracy : 1.0;
  auto k = static_cast<long long>(std::ceil(desired_accuracy / kThresholdGridStep));
  double value = above != nullptr ? above->threshold : 0.0;
  bool any = false;
  for (; static_cast<double>(k) * kThresholdGridStep < stop; ++k) {
    const double p = static_cast<double>(k) * kThresholdGridStep;
    if (p >= 1.0) break;
    value = std::max(value, model.raw_threshold(p));
    any = true;
  }
  if (!any && above == nullptr) value = model.raw_threshold(desired_accuracy);
  if (below != nullptr) value = std::min(value, below->threshold);
  return value;
}

}  // namespace fcmstop
