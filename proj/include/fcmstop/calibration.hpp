#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fcmstop/fcm.hpp"
#include "fcmstop/imagery.hpp"
#include "fcmstop/lof.hpp"
#include "fcmstop/regression.hpp"

namespace fcmstop {

/// Accuracy and objective change rate at one iteration of one training image.
struct CalibrationPoint {
  std::string image_id;
  std::size_t iteration = 0;  ///< 1-based, >= 2
  double accuracy = 0.0;
  double change_rate = 0.0;

  friend bool operator==(const CalibrationPoint&, const CalibrationPoint&) = default;
};

/// Per-dimension standardization of (accuracy, ln change_rate).
struct Scaler {
  std::array<double, 2> means{};
  std::array<double, 2> stds{1.0, 1.0};

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

struct ThresholdEntry {
  double accuracy = 0.0;
  double threshold = 0.0;

  friend bool operator==(const ThresholdEntry&, const ThresholdEntry&) = default;
};

/// Output of the training phase.
struct CalibrationModel {
  static constexpr int kFormatVersion = 1;

  Scaler scaler;
  SvrModel regressor;
  FcmConfig fcm_config;
  std::vector<ThresholdEntry> threshold_table;  ///< ascending accuracy, non-increasing threshold
  std::string corpus_fingerprint;
  double training_time_seconds = 0.0;

  /// Regressor readout: exp(unscale(svr(scale(accuracy)))), no clipping.
  double raw_threshold(double accuracy) const;
};

/// Relative objective decrease (J[m-1] - J[m]) / J[m-1] for 1-based m >= 2;
/// 0 when J[m-1] is 0.
double change_rate(std::span<const double> objectives, std::size_t m);

struct CollectOptions {
  std::size_t jobs = 1;
  RunOptions run;
};

struct ImageFailure {
  std::string image_id;
  std::string message;
};

struct CalibrationHarvest {
  std::vector<CalibrationPoint> points;  ///< ordered by (image_id, iteration)
  double training_time_seconds = 0.0;    ///< summed clustering time over all images
  std::vector<ImageFailure> failures;
  std::size_t n_images = 0;
};

/// Points of one finished trace (n - 1 of them).
std::vector<CalibrationPoint> calibration_points(const std::string& image_id, const ClusterTrace& trace);

/// Clusters every image to convergence and emits n - 1 points per image.
/// Failed images are skipped and reported; throws CalibrationError if all fail.
CalibrationHarvest collect_calibration_points(std::span<const ImageRecord> corpus, const FcmConfig& config,
                                              const CollectOptions& options = {});

struct ThresholdFit {
  CalibrationModel model;
  std::size_t n_points = 0;      ///< points offered
  std::size_t n_zero_rate = 0;   ///< dropped because change_rate <= 0
  std::vector<std::size_t> removed;  ///< LOF outliers, indices into the positive-rate points
  std::vector<CalibrationPoint> used;  ///< points the regressor was fitted on
};

/// Standardize (r, ln delta), drop LOF outliers, fit SVR of ln delta on r,
/// read thresholds at each grid accuracy and clip them non-increasing.
ThresholdFit fit_threshold_model(std::span<const CalibrationPoint> points, const LofConfig& lof,
                                 const SvrHyperparams& svr, std::span<const double> accuracy_grid);

/// Grid used for thresholds between table entries.
inline constexpr double kThresholdGridStep = 1e-4;

/// Stop threshold for a desired accuracy in (0, 1). Table entries are returned
/// verbatim; other accuracies take the running maximum of the regressor over
/// the grid up to the next table entry, clipped by both neighbors, so the
/// result is non-increasing in accuracy.
double threshold_for(const CalibrationModel& model, double desired_accuracy);

/// True when `desired_accuracy` is an exact table entry.
bool in_threshold_table(const CalibrationModel& model, double desired_accuracy);

void save_model(const CalibrationModel& model, const std::filesystem::path& path);
CalibrationModel load_model(const std::filesystem::path& path);

std::string model_to_json(const CalibrationModel& model);
CalibrationModel model_from_json(const std::string& text);

void write_calibration_points_csv(std::span<const CalibrationPoint> points, const std::filesystem::path& path);

}  // namespace fcmstop
