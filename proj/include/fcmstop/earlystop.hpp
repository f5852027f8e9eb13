#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fcmstop/calibration.hpp"
#include "fcmstop/fcm.hpp"
#include "fcmstop/imagery.hpp"

namespace fcmstop {

struct EarlyStopResult {
  Labels labels;                    ///< hard labels at the stop iteration
  std::size_t stop_iteration = 0;   ///< 1-based
  std::vector<double> objectives;   ///< J up to the stop iteration
  double elapsed = 0.0;             ///< seconds
  bool stopped_early = false;       ///< the change-rate rule fired
};

/// Clusters until the first iteration m >= 2 with change rate < threshold,
/// or until ordinary convergence.
EarlyStopResult classify_early_stop(const FeatureMatrix& features, const FcmConfig& config, double threshold,
                                    const RunOptions& options = {});

struct EvaluationRecord {
  std::string image_id;
  double desired_accuracy = 0.0;
  double threshold = 0.0;
  double achieved_accuracy = 0.0;  ///< Rand(L_s, L_n)
  double time_fraction = 0.0;      ///< T_s / T_n
  std::size_t stop_iteration = 0;
  std::size_t total_iterations = 0;
  double stop_seconds = 0.0;
  double total_seconds = 0.0;
};

/// First 1-based iteration m >= 2 whose change rate is strictly below
/// `threshold`; the trace length when none is.
std::size_t first_stop_iteration(std::span<const double> objectives, double threshold);

/// Reads s and n off one complete trace.
EvaluationRecord evaluate_trace(const std::string& image_id, const ClusterTrace& trace, double threshold,
                                double desired_accuracy);

/// Runs one image to full convergence and evaluates the stop rule on its trace.
EvaluationRecord evaluate_early_stop(const FeatureMatrix& features, const FcmConfig& config, double threshold,
                                     double desired_accuracy, const RunOptions& options = {});

struct LevelSummary {
  double desired_accuracy = 0.0;
  double threshold = 0.0;
  double mean_achieved = 0.0;
  double std_achieved = 0.0;  ///< population standard deviation
  double mean_time_fraction = 0.0;
  std::size_t n_images = 0;
};

struct EvaluationReport {
  std::vector<LevelSummary> levels;
  std::vector<EvaluationRecord> records;  ///< grouped by level, then image_id
  std::string model_fingerprint;
  std::string corpus_fingerprint;
  double training_time_seconds = 0.0;
  std::vector<ImageFailure> failures;
};

/// Mean / std / mean time fraction for one accuracy level.
LevelSummary summarize_level(double desired_accuracy, double threshold, std::span<const EvaluationRecord> records);

struct EvaluateOptions {
  std::size_t jobs = 1;
  RunOptions run;
};

/// Evaluates every image at every accuracy level. Each image is clustered
/// once; all levels are read off the same trace. `config` must agree with the
/// model's cluster count (ConfigError otherwise).
EvaluationReport evaluate_corpus(std::span<const ImageRecord> corpus, const CalibrationModel& model,
                                 std::span<const double> accuracies, const FcmConfig& config,
                                 const EvaluateOptions& options = {});

std::string report_to_json(const EvaluationReport& report);
void save_report(const EvaluationReport& report, const std::filesystem::path& path);
EvaluationReport load_report(const std::filesystem::path& path);

/// `accuracy,mean_achieved,std_achieved`
void write_accuracy_table(const EvaluationReport& report, const std::filesystem::path& path);
/// `accuracy,mean_time_fraction`
void write_time_table(const EvaluationReport& report, const std::filesystem::path& path);

}  // namespace fcmstop
