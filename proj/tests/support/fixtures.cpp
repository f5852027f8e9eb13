#include "support/fixtures.hpp"

#include <cstdio>

#include "fcmstop/synthetic.hpp"

namespace fixture {

std::vector<fcmstop::ImageRecord> scenes(std::size_t count, std::size_t size, std::uint64_t first_seed, double noise) {
  std::vector<fcmstop::ImageRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    fcmstop::synthetic::SceneSpec spec;
    spec.width = spec.height = size;
    spec.noise_sigma = noise;
    char id[32];
    std::snprintf(id, sizeof id, "scene_%03zu", i);
    out.push_back(fcmstop::synthetic::scene_record(fcmstop::synthetic::make_scene(spec, first_seed + i), id));
  }
  return out;
}

const fcmstop::CalibrationModel& small_model() {
  static const fcmstop::CalibrationModel model = [] {
    const auto corpus = scenes(8, 32, 300);
    fcmstop::FcmConfig config;
    config.seed = 1;
    const auto harvest = fcmstop::collect_calibration_points(corpus, config);
    const std::vector<double> grid{0.85, 0.90, 0.95, 0.99, 0.999};
    auto fit = fcmstop::fit_threshold_model(harvest.points, {}, {}, grid);
    fit.model.fcm_config = config;
    fit.model.corpus_fingerprint = fcmstop::corpus_fingerprint(corpus);
    fit.model.training_time_seconds = harvest.training_time_seconds;
    return fit.model;
  }();
  return model;
}

}  // namespace fixture
