#pragma once

#include <cstdint>
#include <vector>

#include "fcmstop/fcm.hpp"
#include "fcmstop/imagery.hpp"

namespace fcmstop::synthetic {

/// Parameters of a piecewise-constant RGB test scene: `n_regions` Voronoi
/// cells, each with its own base color, plus Gaussian pixel noise.
struct SceneSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  std::size_t n_regions = 6;
  double noise_sigma = 0.05;     ///< in [0,1] channel units
  double min_color_gap = 0.25;   ///< minimum Euclidean distance between region colors
};

struct Scene {
  std::vector<std::uint8_t> rgb;  ///< row-major interleaved
  Labels truth;                   ///< region index per pixel
  std::size_t width = 0;
  std::size_t height = 0;
};

Scene make_scene(const SceneSpec& spec, std::uint64_t seed);

/// Scene as an in-memory corpus entry (digest over the RGB bytes).
ImageRecord scene_record(const Scene& scene, const std::string& id);

/// `per_blob` points around each center with isotropic Gaussian noise; truth labels alongside.
struct Blobs {
  FeatureMatrix features;
  Labels truth;
};

Blobs make_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sigma,
                 std::uint64_t seed);

}  // namespace fcmstop::synthetic
