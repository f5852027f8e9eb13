#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "fcmstop/calibration.hpp"
#include "fcmstop/errors.hpp"

namespace fcmstop {
namespace {

using nlohmann::json;

const json& require(const json& parent, const std::string& key, const std::string& path) {
  if (!parent.is_object() || !parent.contains(key)) throw SchemaError(path + "/" + key, "missing field");
  return parent.at(key);
}

double require_number(const json& parent, const std::string& key, const std::string& path) {
  const json& value = require(parent, key, path);
  if (!value.is_number()) throw SchemaError(path + "/" + key, "expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path + "/" + key, "non-finite number");
  return x;
}

std::uint64_t require_unsigned(const json& parent, const std::string& key, const std::string& path) {
  const json& value = require(parent, key, path);
  if (!value.is_number_unsigned()) throw SchemaError(path + "/" + key, "expected a non-negative integer");
  return value.get<std::uint64_t>();
}

std::vector<double> require_numbers(const json& parent, const std::string& key, const std::string& path) {
  const json& value = require(parent, key, path);
  if (!value.is_array()) throw SchemaError(path + "/" + key, "expected an array");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_number()) throw SchemaError(path + "/" + key + "/" + std::to_string(i), "expected a number");
    out.push_back(value[i].get<double>());
  }
  return out;
}

json config_to_json(const FcmConfig& c) {
  return {{"n_clusters", c.n_clusters},
          {"fuzzifier", c.fuzzifier},
          {"epsilon", c.epsilon},
          {"max_iterations", c.max_iterations},
          {"seed", c.seed},
          {"init", c.init == InitMethod::dirichlet ? "dirichlet" : "seeded_centers"}};
}

FcmConfig config_from_json(const json& j, const std::string& path) {
  FcmConfig c;
  c.n_clusters = require_unsigned(j, "n_clusters", path);
  c.fuzzifier = require_number(j, "fuzzifier", path);
  c.epsilon = require_number(j, "epsilon", path);
  c.max_iterations = require_unsigned(j, "max_iterations", path);
  c.seed = require_unsigned(j, "seed", path);
  const json& init = require(j, "init", path);
  if (init == "seeded_centers") {
    c.init = InitMethod::seeded_centers;
  } else if (init == "dirichlet") {
    c.init = InitMethod::dirichlet;
  } else {
    throw SchemaError(path + "/init", "expected \"seeded_centers\" or \"dirichlet\"");
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw SchemaError(path, e.what());
  }
  return c;
}

}  // namespace

std::string model_to_json(const CalibrationModel& model) {
  json table = json::array();
  for (const auto& e : model.threshold_table) table.push_back(json::array({e.accuracy, e.threshold}));
  const json doc = {
      {"version", CalibrationModel::kFormatVersion},
      {"scaler", {{"means", model.scaler.means}, {"stds", model.scaler.stds}}},
      {"svr",
       {{"gamma", model.regressor.gamma},
        {"bias", model.regressor.bias},
        {"support_inputs", model.regressor.support_inputs},
        {"dual_coeffs", model.regressor.dual_coeffs},
        {"converged", model.regressor.converged}}},
      {"fcm_config", config_to_json(model.fcm_config)},
      {"threshold_table", table},
      {"corpus_fingerprint", model.corpus_fingerprint},
      {"training_time_seconds", model.training_time_seconds},
  };
  return doc.dump(2) + "\n";
}

CalibrationModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "document is not an object");

  const json& version = require(doc, "version", "");
  if (!version.is_number_integer()) throw SchemaError("/version", "expected an integer");
  if (version.get<long long>() != CalibrationModel::kFormatVersion) {
    throw VersionError("model format version " + std::to_string(version.get<long long>()) +
                       " is not supported (expected " + std::to_string(CalibrationModel::kFormatVersion) + ")");
  }

  CalibrationModel model;
  const json& scaler = require(doc, "scaler", "");
  const auto means = require_numbers(scaler, "means", "/scaler");
  const auto stds = require_numbers(scaler, "stds", "/scaler");
  if (means.size() != 2) throw SchemaError("/scaler/means", "expected 2 values");
  if (stds.size() != 2) throw SchemaError("/scaler/stds", "expected 2 values");
  for (std::size_t k = 0; k < 2; ++k) {
    if (!(stds[k] > 0.0)) throw SchemaError("/scaler/stds/" + std::to_string(k), "must be > 0");
    model.scaler.means[k] = means[k];
    model.scaler.stds[k] = stds[k];
  }

  const json& svr = require(doc, "svr", "");
  model.regressor.gamma = require_number(svr, "gamma", "/svr");
  if (!(model.regressor.gamma > 0.0)) throw SchemaError("/svr/gamma", "must be > 0");
  model.regressor.bias = require_number(svr, "bias", "/svr");
  model.regressor.support_inputs = require_numbers(svr, "support_inputs", "/svr");
  model.regressor.dual_coeffs = require_numbers(svr, "dual_coeffs", "/svr");
  if (model.regressor.support_inputs.size() != model.regressor.dual_coeffs.size()) {
    throw SchemaError("/svr/dual_coeffs", "length differs from support_inputs");
  }
  const json& converged = require(svr, "converged", "/svr");
  if (!converged.is_boolean()) throw SchemaError("/svr/converged", "expected a boolean");
  model.regressor.converged = converged.get<bool>();

  model.fcm_config = config_from_json(require(doc, "fcm_config", ""), "/fcm_config");

  const json& table = require(doc, "threshold_table", "");
  if (!table.is_array()) throw SchemaError("/threshold_table", "expected an array");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string at = "/threshold_table/" + std::to_string(i);
    const json& row = table[i];
    if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
      throw SchemaError(at, "expected [accuracy, threshold]");
    }
    const ThresholdEntry entry{row[0].get<double>(), row[1].get<double>()};
    if (!(entry.accuracy > 0.0 && entry.accuracy < 1.0)) throw SchemaError(at, "accuracy outside (0, 1)");
    if (!(entry.threshold > 0.0)) throw SchemaError(at, "threshold must be > 0");
    if (!model.threshold_table.empty()) {
      const auto& prev = model.threshold_table.back();
      if (!(entry.accuracy > prev.accuracy)) throw SchemaError(at, "accuracies must be increasing");
      if (entry.threshold > prev.threshold) throw SchemaError(at, "thresholds must be non-increasing");
    }
    model.threshold_table.push_back(entry);
  }

  const json& fingerprint = require(doc, "corpus_fingerprint", "");
  if (!fingerprint.is_string()) throw SchemaError("/corpus_fingerprint", "expected a string");
  model.corpus_fingerprint = fingerprint.get<std::string>();
  model.training_time_seconds = require_number(doc, "training_time_seconds", "");
  return model;
}

void save_model(const CalibrationModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write model to " + path.string());
  out << model_to_json(model);
  if (!out) throw OutputError("failed writing model to " + path.string());
}

CalibrationModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot read model " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

void write_calibration_points_csv(std::span<const CalibrationPoint> points, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << "image_id,iteration,accuracy,change_rate\n" << std::setprecision(17);
  for (const auto& p : points) out << p.image_id << ',' << p.iteration << ',' << p.accuracy << ',' << p.change_rate << '\n';
}

}  // namespace fcmstop
