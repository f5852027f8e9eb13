#include "fcmstop/earlystop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "fcmstop/errors.hpp"
#include "fcmstop/rand_index.hpp"

namespace fcmstop {

std::size_t first_stop_iteration(std::span<const double> objectives, double threshold) {
  for (std::size_t m = 2; m <= objectives.size(); ++m) {
    if (change_rate(objectives, m) < threshold) return m;
  }
  return objectives.size();
}

EarlyStopResult classify_early_stop(const FeatureMatrix& features, const FcmConfig& config, double threshold,
                                    const RunOptions& options) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw InputError("stop threshold must be finite and >= 0");
  bool fired = false;
  const StopPredicate stop = [&](const ClusterTrace& trace) {
    fired = change_rate(trace.objectives, trace.n_iterations()) < threshold;
    return fired;
  };
  FcmResult run = run_fcm(features, config, stop, options);

  EarlyStopResult result;
  result.stop_iteration = run.trace.n_iterations();
  result.labels = std::move(run.trace.labels.back());
  result.objectives = std::move(run.trace.objectives);
  result.elapsed = run.trace.total_time();
  result.stopped_early = fired;
  return result;
}

EvaluationRecord evaluate_trace(const std::string& image_id, const ClusterTrace& trace, double threshold,
                                double desired_accuracy) {
  if (trace.n_iterations() < 2) throw InputError("evaluation needs a trace of at least 2 iterations");
  EvaluationRecord record;
  record.image_id = image_id;
  record.desired_accuracy = desired_accuracy;
  record.threshold = threshold;
  record.total_iterations = trace.n_iterations();
  record.stop_iteration = first_stop_iteration(trace.objectives, threshold);
  const std::size_t s = record.stop_iteration;
  record.achieved_accuracy = s == trace.n_iterations() ? 1.0 : rand_index_contingency(trace.labels[s - 1], trace.labels.back());
  for (std::size_t k = 0; k < trace.n_iterations(); ++k) {
    if (k < s) record.stop_seconds += trace.iter_times[k];
    record.total_seconds += trace.iter_times[k];
  }
  record.time_fraction = record.total_seconds > 0.0 ? record.stop_seconds / record.total_seconds
                                                    : static_cast<double>(s) / static_cast<double>(trace.n_iterations());
  return record;
}

EvaluationRecord evaluate_early_stop(const FeatureMatrix& features, const FcmConfig& config, double threshold,
                                     double desired_accuracy, const RunOptions& options) {
  if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw InputError("stop threshold must be finite and >= 0");
  const FcmResult run = run_fcm(features, config, {}, options);
  return evaluate_trace("", run.trace, threshold, desired_accuracy);
}

LevelSummary summarize_level(double desired_accuracy, double threshold, std::span<const EvaluationRecord> records) {
  LevelSummary level;
  level.desired_accuracy = desired_accuracy;
  level.threshold = threshold;
  level.n_images = records.size();
  if (records.empty()) return level;
  const double n = static_cast<double>(records.size());
  for (const auto& r : records) {
    level.mean_achieved += r.achieved_accuracy;
    level.mean_time_fraction += r.time_fraction;
  }
  level.mean_achieved /= n;
  level.mean_time_fraction /= n;
  double var = 0.0;
  for (const auto& r : records) var += (r.achieved_accuracy - level.mean_achieved) * (r.achieved_accuracy - level.mean_achieved);
  level.std_achieved = std::sqrt(var / n);
  return level;
}

EvaluationReport evaluate_corpus(std::span<const ImageRecord> corpus, const CalibrationModel& model,
                                 std::span<const double> accuracies, const FcmConfig& config,
                                 const EvaluateOptions& options) {
  if (corpus.empty()) throw InputError("evaluation corpus is empty");
  if (accuracies.empty()) throw InputError("no accuracy levels requested");
  if (config.n_clusters != model.fcm_config.n_clusters) {
    throw ConfigError("model was calibrated with " + std::to_string(model.fcm_config.n_clusters) +
                      " clusters but evaluation requests " + std::to_string(config.n_clusters));
  }
  config.validate();

  std::vector<double> thresholds;
  for (double a : accuracies) thresholds.push_back(threshold_for(model, a));

  // Stable image order by id regardless of input order.
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return corpus[a].id < corpus[b].id; });

  struct Slot {
    std::vector<EvaluationRecord> per_level;
    std::string error;
  };
  std::vector<Slot> slots(corpus.size());
  const int jobs = static_cast<int>(std::max<std::size_t>(1, options.jobs));
  const auto n_images = static_cast<std::ptrdiff_t>(corpus.size());

#pragma omp parallel for num_threads(jobs) schedule(dynamic, 1) if (jobs > 1)
  for (std::ptrdiff_t idx = 0; idx < n_images; ++idx) {
    auto& slot = slots[static_cast<std::size_t>(idx)];
    const auto& image = corpus[order[static_cast<std::size_t>(idx)]];
    try {
      const FcmResult run = run_fcm(image.features, config, {}, options.run);
      for (std::size_t level = 0; level < accuracies.size(); ++level) {
        slot.per_level.push_back(evaluate_trace(image.id, run.trace, thresholds[level], accuracies[level]));
      }
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }

  EvaluationReport report;
  report.model_fingerprint = "sha256:" + sha256_hex(model_to_json(model));
  report.corpus_fingerprint = corpus_fingerprint(corpus);
  report.training_time_seconds = model.training_time_seconds;
  for (std::size_t idx = 0; idx < slots.size(); ++idx) {
    if (!slots[idx].error.empty()) report.failures.push_back({corpus[order[idx]].id, slots[idx].error});
  }
  if (report.failures.size() == corpus.size()) {
    throw CalibrationError("clustering failed on every evaluation image (first: " + report.failures.front().message + ")");
  }
  for (std::size_t level = 0; level < accuracies.size(); ++level) {
    std::vector<EvaluationRecord> records;
    for (const auto& slot : slots) {
      if (slot.error.empty()) records.push_back(slot.per_level[level]);
    }
    report.levels.push_back(summarize_level(accuracies[level], thresholds[level], records));
    report.records.insert(report.records.end(), records.begin(), records.end());
  }
  return report;
}

namespace {

using nlohmann::json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"desired_accuracy", l.desired_accuracy},
                      {"threshold", l.threshold},
                      {"mean_achieved", l.mean_achieved},
                      {"std_achieved", l.std_achieved},
                      {"mean_time_fraction", l.mean_time_fraction},
                      {"n_images", l.n_images}});
  }
  json records = json::array();
  for (const auto& r : report.records) {
    records.push_back({{"image_id", r.image_id},
                       {"desired_accuracy", r.desired_accuracy},
                       {"threshold", r.threshold},
                       {"achieved_accuracy", r.achieved_accuracy},
                       {"time_fraction", r.time_fraction},
                       {"stop_iteration", r.stop_iteration},
                       {"total_iterations", r.total_iterations},
                       {"stop_seconds", r.stop_seconds},
                       {"total_seconds", r.total_seconds}});
  }
  json failures = json::array();
  for (const auto& f : report.failures) failures.push_back({{"image_id", f.image_id}, {"message", f.message}});
  const json doc = {{"version", 1},
                    {"model_fingerprint", report.model_fingerprint},
                    {"corpus_fingerprint", report.corpus_fingerprint},
                    {"training_time_seconds", report.training_time_seconds},
                    {"levels", levels},
                    {"records", records},
                    {"failures", failures}};
  return doc.dump(2) + "\n";
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << report_to_json(report);
}

EvaluationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read report " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  EvaluationReport report;
  try {
    report.model_fingerprint = doc.at("model_fingerprint").get<std::string>();
    report.corpus_fingerprint = doc.at("corpus_fingerprint").get<std::string>();
    report.training_time_seconds = doc.at("training_time_seconds").get<double>();
    for (const auto& l : doc.at("levels")) {
      report.levels.push_back({l.at("desired_accuracy").get<double>(), l.at("threshold").get<double>(),
                               l.at("mean_achieved").get<double>(), l.at("std_achieved").get<double>(),
                               l.at("mean_time_fraction").get<double>(), l.at("n_images").get<std::size_t>()});
    }
    for (const auto& r : doc.at("records")) {
      EvaluationRecord rec;
      rec.image_id = r.at("image_id").get<std::string>();
      rec.desired_accuracy = r.at("desired_accuracy").get<double>();
      rec.threshold = r.at("threshold").get<double>();
      rec.achieved_accuracy = r.at("achieved_accuracy").get<double>();
      rec.time_fraction = r.at("time_fraction").get<double>();
      rec.stop_iteration = r.at("stop_iteration").get<std::size_t>();
      rec.total_iterations = r.at("total_iterations").get<std::size_t>();
      rec.stop_seconds = r.at("stop_seconds").get<double>();
      rec.total_seconds = r.at("total_seconds").get<double>();
      report.records.push_back(rec);
    }
    for (const auto& f : doc.at("failures")) {
      report.failures.push_back({f.at("image_id").get<std::string>(), f.at("message").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw SchemaError("", std::string("malformed report: ") + e.what());
  }
  return report;
}

void write_accuracy_table(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "accuracy,mean_achieved,std_achieved\n";
  for (const auto& l : report.levels) out << l.desired_accuracy << ',' << l.mean_achieved << ',' << l.std_achieved << '\n';
}

void write_time_table(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "accuracy,mean_time_fraction\n";
  for (const auto& l : report.levels) out << l.desired_accuracy << ',' << l.mean_time_fraction << '\n';
}

}  // namespace fcmstop
