// Timing harness for the two data-parallel kernels, each measured against its
// serial reference implementation. Outputs are compared for equality while
// timing, so this doubles as a quick consistency check.

#include <chrono>
#include <cstdio>
#include <cstring>

#include <omp.h>

#include "polarcp/eval.hpp"
#include "polarcp/heatmap.hpp"
#include "polarcp/synthdata.hpp"

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kRuns = 3;

template <typename F>
double best_seconds(F&& fn) {
  double best = 1e300;
  for (int r = 0; r < kRuns; ++r) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool match) {
  std::printf("%-22s serial %8.1f ms   parallel %8.1f ms   speedup %5.2fx   %s\n",
              name, serial_s * 1e3, parallel_s * 1e3, serial_s / parallel_s,
              match ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }
  std::printf("threads: %d (best of %d runs)\n", omp_get_max_threads(), kRuns);

  polarcp::GeneratorConfig gen;
  gen.n = quick ? 3500 : 5000;
  const auto data = polarcp::generate(gen);

  // Rasterizer: an 8-level ladder over a large grid.
  {
    const int side = quick ? 384 : 768;
    const auto cal = std::span<const polarcp::Sample>(data).first(500);
    std::vector<polarcp::CoverageLevel> levels;
    for (int c = 1; c <= 8; ++c) {
      const double coverage = 0.1 * c;
      levels.push_back(
          {coverage, polarcp::joint_interval(
                         polarcp::Method::kCp,
                         {polarcp::CorrectionKind::kBonferroni, 2},
                         1.0 - coverage, cal, data[600])});
    }
    polarcp::HeatmapGrid serial_grid, parallel_grid;
    const double t_serial = best_seconds([&] {
      serial_grid = polarcp::rasterize_serial(levels, 0.5, 0.5, side, side);
    });
    const double t_parallel = best_seconds([&] {
      parallel_grid = polarcp::rasterize(levels, 0.5, 0.5, side, side);
    });
    report("rasterize", t_serial, t_parallel,
           serial_grid.cells == parallel_grid.cells);
  }

  // Trial loop: fixed-width construction only, so the benchmark measures the
  // per-trial calibration and scoring rather than one-off head training.
  {
    polarcp::ProtocolConfig config;
    config.methods = {polarcp::Method::kCp};
    config.n_trials = quick ? 10 : 20;
    config.n_test = quick ? 1000 : 2000;
    config.n_train = 0;
    polarcp::ProtocolResult serial_res, parallel_res;
    const double t_serial = best_seconds(
        [&] { serial_res = polarcp::run_protocol_serial(data, config); });
    const double t_parallel =
        best_seconds([&] { parallel_res = polarcp::run_protocol(data, config); });
    bool match = serial_res.trials.size() == parallel_res.trials.size();
    for (std::size_t c = 0; match && c < serial_res.trials.size(); ++c) {
      for (std::size_t t = 0; match && t < serial_res.trials[c].size(); ++t) {
        const auto& a = serial_res.trials[c][t];
        const auto& b = parallel_res.trials[c][t];
        match = a.coverage == b.coverage &&
                a.mean_angle_width == b.mean_angle_width &&
                a.mean_mag_width == b.mean_mag_width;
      }
    }
    report("coverage protocol", t_serial, t_parallel, match);
  }
  return 0;
}
