#include "fcmstop/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "fcmstop/errors.hpp"

namespace fcmstop::synthetic {

Scene make_scene(const SceneSpec& spec, std::uint64_t seed) {
  if (spec.width == 0 || spec.height == 0 || spec.n_regions == 0) throw ConfigError("empty scene");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, spec.noise_sigma);

  std::vector<std::array<double, 3>> colors;
  for (std::size_t attempt = 0; colors.size() < spec.n_regions; ++attempt) {
    const std::array<double, 3> c{0.1 + 0.8 * unit(rng), 0.1 + 0.8 * unit(rng), 0.1 + 0.8 * unit(rng)};
    bool far_enough = attempt > 10000;
    if (!far_enough) {
      far_enough = true;
      for (const auto& other : colors) {
        const double d = std::hypot(c[0] - other[0], c[1] - other[1], c[2] - other[2]);
        if (d < spec.min_color_gap) far_enough = false;
      }
    }
    if (far_enough) colors.push_back(c);
  }

  std::vector<std::array<double, 2>> sites(spec.n_regions);
  for (auto& s : sites) s = {unit(rng) * static_cast<double>(spec.width), unit(rng) * static_cast<double>(spec.height)};

  Scene scene;
  scene.width = spec.width;
  scene.height = spec.height;
  scene.truth.resize(spec.width * spec.height);
  scene.rgb.resize(spec.width * spec.height * 3);
  for (std::size_t y = 0; y < spec.height; ++y) {
    for (std::size_t x = 0; x < spec.width; ++x) {
      std::size_t region = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < sites.size(); ++r) {
        const double d = std::hypot(static_cast<double>(x) + 0.5 - sites[r][0], static_cast<double>(y) + 0.5 - sites[r][1]);
        if (d < best) {
          best = d;
          region = r;
        }
      }
      const std::size_t p = y * spec.width + x;
      scene.truth[p] = static_cast<Label>(region);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double v = std::clamp(colors[region][ch] + noise(rng), 0.0, 1.0);
        scene.rgb[3 * p + ch] = static_cast<std::uint8_t>(std::lround(v * 255.0));
      }
    }
  }
  return scene;
}

ImageRecord scene_record(const Scene& scene, const std::string& id) {
  std::vector<double> values(scene.rgb.size());
  for (std::size_t k = 0; k < values.size(); ++k) values[k] = scene.rgb[k] / 255.0;
  ImageRecord record;
  record.id = id;
  record.width = scene.width;
  record.height = scene.height;
  record.features = FeatureMatrix(scene.width * scene.height, 3, std::move(values));
  record.content_digest = sha256_hex(scene.rgb);
  return record;
}

Blobs make_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sigma,
                 std::uint64_t seed) {
  if (centers.empty() || per_blob == 0) throw ConfigError("make_blobs needs centers and points");
  const std::size_t dims = centers.front().size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> values;
  Labels truth;
  for (std::size_t b = 0; b < centers.size(); ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      for (std::size_t k = 0; k < dims; ++k) values.push_back(centers[b][k] + noise(rng));
      truth.push_back(static_cast<Label>(b));
    }
  }
  return {FeatureMatrix(truth.size(), dims, std::move(values)), std::move(truth)};
}

}  // namespace fcmstop::synthetic
