#pragma once

// Forecast records and their on-disk CSV form. One row per motion vector:
// ground truth and point forecast in polar form plus the feature vector the
// quantile heads consume.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace polarcp {

struct Sample {
  std::int64_t id = 0;
  std::vector<double> features;
  double gt_angle = 0.0;    // radians, (-pi, pi]
  double gt_mag = 0.0;      // [0, sqrt(2)]
  double pred_angle = 0.0;  // point forecast
  double pred_mag = 0.0;
};

// Column header for a dataset with feature dimension d:
// id,f0,...,f{d-1},gt_angle,gt_mag,pred_angle,pred_mag
std::string dataset_header(int feature_dim);

// Shortest-round-trip formatting of a double (%.17g). Used everywhere a float
// is written to CSV so that read-back is bit exact.
std::string format_double(double v);

void write_dataset_csv(std::ostream& os, std::span<const Sample> samples);
void write_dataset_csv(const std::filesystem::path& path,
                       std::span<const Sample> samples);

// Throws ValidationError with a line number on malformed input, IoError when
// the file cannot be opened. Lines starting with '#' are comments.
std::vector<Sample> read_dataset_csv(std::istream& is);
std::vector<Sample> read_dataset_csv(const std::filesystem::path& path);

}  // namespace polarcp
