#include "polarcp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include "polarcp/errors.hpp"
#include "polarcp/geometry.hpp"

namespace polarcp {

namespace {

constexpr double kRadToDeg = 180.0 / kPi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d49bb133111ebULL;
  return x ^ (x >> 31);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population convention
};

MeanStd mean_std(std::span<const double> xs) {
  MeanStd r;
  if (xs.empty()) return r;
  const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
  if (*mn == *mx) {
    // Constant input: report it exactly. Summation round-off would otherwise
    // leave a ~1e-16 phantom spread, and fixed-width constructions rely on
    // the std being exactly zero.
    r.mean = *mn;
    return r;
  }
  const double n = static_cast<double>(xs.size());
  for (double x : xs) r.mean += x;
  r.mean /= n;
  double acc = 0.0;
  for (double x : xs) acc += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(acc / n);
  return r;
}

struct Cell {
  Method method;
  Target target;
  Correction correction;
  double alpha;
};

std::vector<Cell> enumerate_cells(const ProtocolConfig& config) {
  std::vector<Cell> cells;
  for (double alpha : config.alphas) {
    for (Method method : config.methods) {
      for (Target target : config.targets) {
        if (target == Target::kJoint) {
          for (CorrectionKind kind : config.corrections) {
            cells.push_back({method, target, Correction{kind, 2}, alpha});
          }
        } else {
          cells.push_back(
              {method, target, Correction{CorrectionKind::kNone, 2}, alpha});
        }
      }
    }
  }
  return cells;
}

std::vector<TrialReport> run_trial(
    int trial, std::span<const Sample> pool, std::span<const Cell> cells,
    const std::map<double, std::shared_ptr<const QuantileHeads>>& heads_by_alpha,
    const ProtocolConfig& config) {
  std::mt19937_64 rng(
      splitmix64(config.seed + static_cast<std::uint64_t>(trial)));
  std::vector<std::size_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);

  std::vector<Sample> cal, test;
  cal.reserve(config.n_cal);
  test.reserve(config.n_test);
  for (int i = 0; i < config.n_cal; ++i) cal.push_back(pool[idx[i]]);
  for (int i = 0; i < config.n_test; ++i)
    test.push_back(pool[idx[config.n_cal + i]]);

  std::vector<TrialReport> reports;
  reports.reserve(cells.size());
  for (const Cell& cell : cells) {
    std::shared_ptr<const QuantileHeads> heads;
    if (cell.method == Method::kCqr) heads = heads_by_alpha.at(cell.alpha);
    reports.push_back(evaluate_trial(cell.method, cell.target, cell.correction,
                                     cell.alpha, cal, test, std::move(heads)));
  }
  return reports;
}

ProtocolResult run_protocol_impl(std::span<const Sample> data,
                                 const ProtocolConfig& config, bool parallel) {
  config.validate(data.size());
  const std::vector<Cell> cells = enumerate_cells(config);

  const bool wants_cqr =
      std::find(config.methods.begin(), config.methods.end(), Method::kCqr) !=
      config.methods.end();
  std::map<double, std::shared_ptr<const QuantileHeads>> heads_by_alpha;
  if (wants_cqr) {
    const std::span<const Sample> train_block = data.first(config.n_train);
    for (double alpha : config.alphas) {
      if (!heads_by_alpha.count(alpha)) {
        heads_by_alpha[alpha] = std::make_shared<const QuantileHeads>(
            train_quantile_heads(train_block, alpha, config.train));
      }
    }
  }
  const std::span<const Sample> pool = data.subspan(config.n_train);

  std::vector<std::vector<TrialReport>> trials(
      cells.size(), std::vector<TrialReport>(config.n_trials));
  std::exception_ptr first_error;

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < config.n_trials; ++t) {
      try {
        auto reports = run_trial(t, pool, cells, heads_by_alpha, config);
        for (std::size_t c = 0; c < cells.size(); ++c) trials[c][t] = reports[c];
      } catch (...) {
#pragma omp critical
        if (!first_error) first_error = std::current_exception();
      }
    }
  } else {
    for (int t = 0; t < config.n_trials; ++t) {
      auto reports = run_trial(t, pool, cells, heads_by_alpha, config);
      for (std::size_t c = 0; c < cells.size(); ++c) trials[c][t] = reports[c];
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  ProtocolResult result;
  result.trials = std::move(trials);
  result.aggregates.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell_trials = result.trials[c];
    std::vector<double> cov, aw, mw;
    for (const TrialReport& r : cell_trials) {
      cov.push_back(r.coverage);
      aw.push_back(r.mean_angle_width);
      mw.push_back(r.mean_mag_width);
    }
    const MeanStd c_cov = mean_std(cov), c_aw = mean_std(aw), c_mw = mean_std(mw);
    AggregateReport agg;
    agg.method = cells[c].method;
    agg.target = cells[c].target;
    agg.correction = cells[c].correction;
    agg.alpha = cells[c].alpha;
    agg.n_trials = config.n_trials;
    agg.mean_coverage = c_cov.mean;
    agg.std_coverage = c_cov.std;
    agg.mean_angle_width = c_aw.mean;
    agg.std_angle_width = c_aw.std;
    agg.mean_mag_width = c_mw.mean;
    agg.std_mag_width = c_mw.std;
    result.aggregates.push_back(agg);
  }
  return result;
}

}  // namespace

std::string to_string(Target t) {
  switch (t) {
    case Target::kAngle: return "angle";
    case Target::kMagnitude: return "magnitude";
    case Target::kJoint: return "joint";
  }
  return "joint";
}

Target target_from_string(const std::string& s) {
  if (s == "angle") return Target::kAngle;
  if (s == "magnitude") return Target::kMagnitude;
  if (s == "joint") return Target::kJoint;
  throw ValidationError("unknown target '" + s +
                        "' (expected angle, magnitude or joint)");
}

TrialReport evaluate_trial(Method method, Target target, Correction correction,
                           double alpha, std::span<const Sample> cal,
                           std::span<const Sample> test,
                           std::shared_ptr<const QuantileHeads> heads) {
  if (test.empty()) throw ValidationError("evaluate_trial: empty test set");
  const JointCalibrator calib = JointCalibrator::calibrate(
      method, correction, alpha, cal, std::move(heads));

  std::vector<double> angle_widths, mag_widths;
  angle_widths.reserve(test.size());
  mag_widths.reserve(test.size());
  std::size_t hits = 0;
  for (const Sample& s : test) {
    const JointInterval ji = calib.interval(s);
    bool hit = false;
    switch (target) {
      case Target::kAngle: hit = circ_contains(ji.angle, s.gt_angle); break;
      case Target::kMagnitude: hit = contains(ji.magnitude, s.gt_mag); break;
      case Target::kJoint: hit = joint_contains(ji, s.gt_angle, s.gt_mag); break;
    }
    hits += hit ? 1 : 0;
    angle_widths.push_back(ji.angle.width());
    mag_widths.push_back(ji.magnitude.width());
  }

  TrialReport r;
  r.method = method;
  r.target = target;
  r.correction = correction;
  r.alpha = alpha;
  r.coverage = static_cast<double>(hits) / static_cast<double>(test.size());
  const MeanStd aw = mean_std(angle_widths), mw = mean_std(mag_widths);
  r.mean_angle_width = aw.mean;
  r.std_angle_width = aw.std;
  r.mean_mag_width = mw.mean;
  r.std_mag_width = mw.std;
  return r;
}

void ProtocolConfig::validate(std::size_t n_samples) const {
  if (methods.empty()) throw ValidationError("protocol: methods must be nonempty");
  if (targets.empty()) throw ValidationError("protocol: targets must be nonempty");
  if (corrections.empty() &&
      std::find(targets.begin(), targets.end(), Target::kJoint) != targets.end())
    throw ValidationError("protocol: corrections must be nonempty for joint target");
  if (alphas.empty()) throw ValidationError("protocol: alphas must be nonempty");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0))
      throw ValidationError("protocol: alphas must be in (0, 1)");
  }
  if (n_trials < 1) throw ValidationError("protocol: n_trials must be >= 1");
  if (n_cal < 1) throw ValidationError("protocol: n_cal must be >= 1");
  if (n_test < 1) throw ValidationError("protocol: n_test must be >= 1");
  if (n_train < 0) throw ValidationError("protocol: n_train must be >= 0");
  const bool wants_cqr =
      std::find(methods.begin(), methods.end(), Method::kCqr) != methods.end();
  if (wants_cqr && n_train < 1)
    throw ValidationError("protocol: cqr needs n_train >= 1 training rows");
  const std::size_t need = static_cast<std::size_t>(n_train) +
                           static_cast<std::size_t>(n_cal) +
                           static_cast<std::size_t>(n_test);
  if (n_samples < need)
    throw ValidationError("protocol: dataset has " + std::to_string(n_samples) +
                          " rows, needs n_train + n_cal + n_test = " +
                          std::to_string(need));
}

ProtocolResult run_protocol(std::span<const Sample> data,
                            const ProtocolConfig& config) {
  return run_protocol_impl(data, config, /*parallel=*/true);
}

ProtocolResult run_protocol_serial(std::span<const Sample> data,
                                   const ProtocolConfig& config) {
  return run_protocol_impl(data, config, /*parallel=*/false);
}

void write_results_csv(std::ostream& os, std::span<const AggregateReport> rows) {
  os << "method,target,correction,alpha,mean_coverage,std_coverage,"
        "mean_angle_width_deg,std_angle_width_deg,mean_mag_width,std_mag_width\n";
  for (const AggregateReport& r : rows) {
    os << to_string(r.method) << ',' << to_string(r.target) << ','
       << to_string(r.correction.kind) << ',' << format_double(r.alpha) << ','
       << format_double(r.mean_coverage) << ',' << format_double(r.std_coverage)
       << ',' << format_double(r.mean_angle_width * kRadToDeg) << ','
       << format_double(r.std_angle_width * kRadToDeg) << ','
       << format_double(r.mean_mag_width) << ','
       << format_double(r.std_mag_width) << '\n';
  }
}

void print_results_table(std::ostream& os,
                         std::span<const AggregateReport> rows) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-6s %-9s %-10s %-6s %-17s %-19s %s\n",
                "method", "target", "correction", "alpha", "coverage",
                "angle width [deg]", "mag width");
  os << buf;
  for (const AggregateReport& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%-6s %-9s %-10s %-6.3f %6.3f +/- %-6.3f %7.1f +/- %-7.1f "
                  "%6.3f +/- %-6.3f\n",
                  to_string(r.method).c_str(), to_string(r.target).c_str(),
                  to_string(r.correction.kind).c_str(), r.alpha,
                  r.mean_coverage, r.std_coverage,
                  r.mean_angle_width * kRadToDeg, r.std_angle_width * kRadToDeg,
                  r.mean_mag_width, r.std_mag_width);
    os << buf;
  }
}

}  // namespace polarcp
