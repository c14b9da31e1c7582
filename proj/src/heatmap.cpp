#include "polarcp/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "polarcp/errors.hpp"

namespace polarcp {

namespace {

void check_levels(std::span<const CoverageLevel> levels) {
  if (levels.empty()) throw ValidationError("rasterize: no coverage levels");
  double prev = 0.0;
  for (const CoverageLevel& l : levels) {
    if (!(l.target_coverage > prev && l.target_coverage < 1.0))
      throw ValidationError(
          "rasterize: target coverages must be strictly increasing in (0, 1)");
    prev = l.target_coverage;
  }
}

// Smallest containing level for the displacement to pixel (i, j), or 0.
int classify_pixel(int i, int j, std::span<const CoverageLevel> levels,
                   double origin_x, double origin_y, int width, int height) {
  const double px = (static_cast<double>(i) + 0.5) / width;
  const double py = (static_cast<double>(j) + 0.5) / height;
  const MotionVector v{px - origin_x, py - origin_y};
  const PolarCoords polar = to_polar(v);
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (joint_contains(levels[l].interval, polar.angle, polar.magnitude))
      return static_cast<int>(l) + 1;
  }
  return 0;
}

HeatmapGrid rasterize_impl(std::span<const CoverageLevel> levels,
                           double origin_x, double origin_y, int width,
                           int height, bool parallel) {
  check_levels(levels);
  if (width < 1 || height < 1)
    throw ValidationError("rasterize: width and height must be >= 1");
  if (!(std::isfinite(origin_x) && std::isfinite(origin_y)))
    throw ValidationError("rasterize: origin must be finite");

  HeatmapGrid grid;
  grid.width = width;
  grid.height = height;
  grid.origin_x = origin_x;
  grid.origin_y = origin_y;
  grid.n_levels = static_cast<int>(levels.size());
  grid.cells.assign(static_cast<std::size_t>(width) * height, 0);

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        grid.cells[static_cast<std::size_t>(j) * width + i] =
            classify_pixel(i, j, levels, origin_x, origin_y, width, height);
      }
    }
  } else {
    for (int j = 0; j < height; ++j) {
      for (int i = 0; i < width; ++i) {
        grid.cells[static_cast<std::size_t>(j) * width + i] =
            classify_pixel(i, j, levels, origin_x, origin_y, width, height);
      }
    }
  }
  return grid;
}

}  // namespace

HeatmapGrid rasterize(std::span<const CoverageLevel> levels, double origin_x,
                      double origin_y, int width, int height) {
  return rasterize_impl(levels, origin_x, origin_y, width, height, true);
}

HeatmapGrid rasterize_serial(std::span<const CoverageLevel> levels,
                             double origin_x, double origin_y, int width,
                             int height) {
  return rasterize_impl(levels, origin_x, origin_y, width, height, false);
}

std::uint8_t level_intensity(int level, int n_levels) {
  if (level < 1 || level > n_levels) return kBackgroundIntensity;
  if (n_levels == 1) return kInnermostIntensity;
  const double span = static_cast<double>(kInnermostIntensity) -
                      static_cast<double>(kOutermostIntensity);
  const double frac = static_cast<double>(n_levels - level) /
                      static_cast<double>(n_levels - 1);
  return static_cast<std::uint8_t>(
      std::lround(kOutermostIntensity + span * frac));
}

PgmImage render_heatmap(const HeatmapGrid& grid,
                        const std::optional<MotionVector>& gt) {
  if (grid.width < 1 || grid.height < 1 ||
      grid.cells.size() != static_cast<std::size_t>(grid.width) * grid.height)
    throw ValidationError("render_heatmap: inconsistent grid");

  PgmImage img;
  img.width = grid.width;
  img.height = grid.height;
  img.pixels.resize(grid.cells.size());
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    img.pixels[k] = level_intensity(grid.cells[k], grid.n_levels);
  }

  if (gt) {
    // Endpoint of the ground-truth displacement, in pixel indices.
    const double ex = grid.origin_x + gt->dx;
    const double ey = grid.origin_y + gt->dy;
    int x0 = static_cast<int>(std::lround(grid.origin_x * grid.width - 0.5));
    int y0 = static_cast<int>(std::lround(grid.origin_y * grid.height - 0.5));
    int x1 = static_cast<int>(std::lround(ex * grid.width - 0.5));
    int y1 = static_cast<int>(std::lround(ey * grid.height - 0.5));
    // Bresenham, clipping each plotted pixel to the image.
    const int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    const int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
      if (x0 >= 0 && x0 < grid.width && y0 >= 0 && y0 < grid.height) {
        img.pixels[static_cast<std::size_t>(y0) * grid.width + x0] = kGtIntensity;
      }
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) { err += dy; x0 += sx; }
      if (e2 <= dx) { err += dx; y0 += sy; }
    }
  }
  return img;
}

void write_pgm(std::ostream& os, const PgmImage& img) {
  os << "P5\n" << img.width << " " << img.height << "\n255\n";
  os.write(reinterpret_cast<const char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const PgmImage& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_pgm: cannot open for writing: " + path.string());
  write_pgm(os, img);
  os.flush();
  if (!os) throw IoError("write_pgm: write failed: " + path.string());
}

nlohmann::json legend_json(const HeatmapGrid& grid,
                           std::span<const CoverageLevel> levels) {
  if (static_cast<int>(levels.size()) != grid.n_levels)
    throw ValidationError("legend_json: level count does not match grid");
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t l = 0; l < levels.size(); ++l) {
    const int level = static_cast<int>(l) + 1;
    entries.push_back(
        {{"level", level},
         {"target_coverage", levels[l].target_coverage},
         {"intensity", level_intensity(level, grid.n_levels)},
         {"angle_center_rad", levels[l].interval.angle.center},
         {"angle_half_width_rad", levels[l].interval.angle.half_width},
         {"mag_lo", levels[l].interval.magnitude.lo},
         {"mag_hi", levels[l].interval.magnitude.hi}});
  }
  return {{"width", grid.width},
          {"height", grid.height},
          {"origin", {grid.origin_x, grid.origin_y}},
          {"background_intensity", kBackgroundIntensity},
          {"gt_intensity", kGtIntensity},
          {"levels", entries}};
}

}  // namespace polarcp
