#include "polarcp/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "polarcp/errors.hpp"
#include "polarcp/geometry.hpp"

namespace polarcp {

namespace {

// Scene magnitudes are drawn uniformly from this range before ground-truth
// spread is added; chosen so typical vectors sit well inside [0, sqrt(2)].
constexpr double kSceneMagLo = 0.08;
constexpr double kSceneMagHi = 0.45;
constexpr double kFeatureJitter = 0.05;

double clamp_mag(double m) {
  return std::clamp(m, 0.0, kMaxMagnitude);
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n < 1) throw ValidationError("generator: n must be >= 1");
  for (double s : angle_noise) {
    if (!(s >= 0.0))
      throw ValidationError("generator: angle_noise scales must be >= 0");
  }
  for (double s : mag_noise) {
    if (!(s >= 0.0))
      throw ValidationError("generator: mag_noise scales must be >= 0");
  }
  if (!std::isfinite(angle_bias))
    throw ValidationError("generator: angle_bias must be finite");
  if (!std::isfinite(mag_bias))
    throw ValidationError("generator: mag_bias must be finite");
  if (feature_dim < 9)
    throw ValidationError(
        "generator: feature_dim must be >= 9 (stratum one-hots, scene angle "
        "and magnitude), got " +
        std::to_string(feature_dim));
}

std::vector<Sample> generate(const GeneratorConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> stratum(0, 2);
  std::uniform_real_distribution<double> scene_angle(-kPi, kPi);
  std::uniform_real_distribution<double> scene_mag(kSceneMagLo, kSceneMagHi);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Sample> out;
  out.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    const int k_angle = stratum(rng);
    const int k_mag = stratum(rng);
    const double c_angle = scene_angle(rng);
    const double c_mag = scene_mag(rng);

    Sample s;
    s.id = i;
    s.features.resize(config.feature_dim);
    for (int j = 0; j < 3; ++j) {
      s.features[j] = (j == k_angle ? 1.0 : 0.0) + kFeatureJitter * normal(rng);
    }
    for (int j = 0; j < 3; ++j) {
      s.features[3 + j] = (j == k_mag ? 1.0 : 0.0) + kFeatureJitter * normal(rng);
    }
    s.features[6] = std::cos(c_angle);
    s.features[7] = std::sin(c_angle);
    s.features[8] = c_mag;
    for (int j = 9; j < config.feature_dim; ++j) s.features[j] = normal(rng);

    const double sa = config.angle_noise[k_angle];
    const double sm = config.mag_noise[k_mag];
    s.gt_angle = wrap_angle(c_angle + kGtSpreadFraction * sa * normal(rng));
    // Reflect at zero rather than clamping so the magnitude law stays smooth.
    s.gt_mag = clamp_mag(std::abs(c_mag + kGtSpreadFraction * sm * normal(rng)));
    s.pred_angle = wrap_angle(s.gt_angle + config.angle_bias + sa * normal(rng));
    s.pred_mag = clamp_mag(s.gt_mag + config.mag_bias + sm * normal(rng));
    out.push_back(std::move(s));
  }
  return out;
}

SplitResult split(std::span<const Sample> data, int n_cal, std::uint64_t seed) {
  if (n_cal < 1 || static_cast<std::size_t>(n_cal) >= data.size())
    throw ValidationError("split: n_cal must be in [1, data size), got " +
                          std::to_string(n_cal) + " for " +
                          std::to_string(data.size()) + " samples");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);

  SplitResult result;
  result.cal.reserve(n_cal);
  result.test.reserve(data.size() - n_cal);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    (i < static_cast<std::size_t>(n_cal) ? result.cal : result.test)
        .push_back(data[idx[i]]);
  }
  return result;
}

}  // namespace polarcp
