#pragma once

#include <cstdint>
#include <vector>

#include "fcmstop/calibration.hpp"
#include "fcmstop/imagery.hpp"

namespace fixture {

/// Small noisy six-region scenes, ids scene_000, scene_001, ...
std::vector<fcmstop::ImageRecord> scenes(std::size_t count, std::size_t size, std::uint64_t first_seed,
                                         double noise = 0.15);

/// Model calibrated on a few small scenes at the default five accuracies.
const fcmstop::CalibrationModel& small_model();

}  // namespace fixture
