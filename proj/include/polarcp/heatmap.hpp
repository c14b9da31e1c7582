#pragma once

// Guaranteed-coverage uncertainty maps: a ladder of nested joint regions at
// increasing target coverage, rasterized over the image plane. Every pixel
// records the tightest region that contains the motion endpoint it
// represents, so the rendered rings carry the calibration guarantee of their
// level.
//
// Coordinates: positions live in the unit square with y growing downward
// (image convention); a displacement from one corner to the other has
// magnitude sqrt(2). Pixel (col i, row j) represents the point
// ((i + 0.5) / width, (j + 0.5) / height).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "polarcp/conformal.hpp"
#include "polarcp/geometry.hpp"

namespace polarcp {

struct CoverageLevel {
  double target_coverage = 0.0;  // e.g. 0.8 for an 80% region
  JointInterval interval;
};

struct HeatmapGrid {
  int width = 0;
  int height = 0;
  double origin_x = 0.5;  // motion origin, unit-square coordinates
  double origin_y = 0.5;
  int n_levels = 0;
  // Row-major; 0 = outside every region, else the 1-based index of the
  // smallest (lowest-coverage) region containing the pixel.
  std::vector<int> cells;
};

// Levels must be sorted by strictly increasing target coverage in (0, 1).
// Nesting of the intervals themselves is the caller's job (same query sample,
// one calibration set, widening alphas); rasterization just evaluates
// membership. The parallel and serial versions produce identical grids.
HeatmapGrid rasterize(std::span<const CoverageLevel> levels, double origin_x,
                      double origin_y, int width, int height);
HeatmapGrid rasterize_serial(std::span<const CoverageLevel> levels,
                             double origin_x, double origin_y, int width,
                             int height);

struct PgmImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0..255
};

inline constexpr std::uint8_t kBackgroundIntensity = 16;
inline constexpr std::uint8_t kInnermostIntensity = 224;
inline constexpr std::uint8_t kOutermostIntensity = 64;
inline constexpr std::uint8_t kGtIntensity = 255;

// Maps 1-based level index to its gray value: the tightest region renders
// brightest, the widest darkest, evenly spaced in between.
std::uint8_t level_intensity(int level, int n_levels);

// Renders the grid; if gt is given, overlays the ground-truth displacement as
// a line from the origin at full intensity.
PgmImage render_heatmap(const HeatmapGrid& grid,
                        const std::optional<MotionVector>& gt = std::nullopt);

// Binary (P5) output; byte stable across runs and across the parallel/serial
// rasterizers.
void write_pgm(std::ostream& os, const PgmImage& img);
void write_pgm(const std::filesystem::path& path, const PgmImage& img);

// Machine-readable legend: per level the target coverage, gray value, and
// region parameters.
nlohmann::json legend_json(const HeatmapGrid& grid,
                           std::span<const CoverageLevel> levels);

}  // namespace polarcp
