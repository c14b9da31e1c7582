#pragma once

// Synthetic motion-vector forecasts with controlled, feature-visible
// heteroscedasticity. Each sample draws an angle noise stratum and a
// magnitude noise stratum independently; the forecast error scale is the
// stratum scale, and the features leak the stratum identity so a quantile
// model can learn to adapt its band width while a plain point+residual
// construction cannot.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "polarcp/dataset.hpp"

namespace polarcp {

// Ground-truth spread around the scene location, as a fraction of the
// stratum's forecaster noise scale. Keeping this well below 1 makes the
// per-stratum ideal band clearly narrower than the pooled residual spread.
inline constexpr double kGtSpreadFraction = 0.4;

struct GeneratorConfig {
  int n = 5000;
  std::uint64_t seed = 7;
  // Forecaster noise scale per stratum, radians / magnitude units. Strata are
  // drawn uniformly and independently for the two tasks.
  std::array<double, 3> angle_noise = {0.4, 0.9, 1.6};
  std::array<double, 3> mag_noise = {0.07, 0.18, 0.42};
  // Systematic forecaster bias added on top of the noise.
  double angle_bias = 0.15;
  double mag_bias = 0.05;
  // Feature layout: f0..f2 angle-stratum one-hot (jittered), f3..f5
  // magnitude-stratum one-hot (jittered), f6..f7 cos/sin of the scene angle,
  // f8 scene magnitude, f9.. standard-normal distractors.
  int feature_dim = 16;

  // Throws ValidationError naming the offending field. Zero noise scales are
  // allowed (degenerate noiseless limit); negative ones are not.
  void validate() const;
};

std::vector<Sample> generate(const GeneratorConfig& config);

struct SplitResult {
  std::vector<Sample> cal;
  std::vector<Sample> test;
};

// Shuffles with the given seed, takes n_cal samples for calibration and the
// rest for evaluation. Requires 1 <= n_cal < data.size().
SplitResult split(std::span<const Sample> data, int n_cal, std::uint64_t seed);

}  // namespace polarcp
