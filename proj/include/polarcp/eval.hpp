#pragma once

// Coverage evaluation: repeated random calibration/test splits, one trial
// report per (method, target, correction, alpha) grid cell, aggregated into
// mean/std summaries. The trial loop is data parallel; a serial twin with
// identical output is kept as the reference implementation.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "polarcp/conformal.hpp"
#include "polarcp/dataset.hpp"
#include "polarcp/quantreg.hpp"

namespace polarcp {

enum class Target { kAngle, kMagnitude, kJoint };

std::string to_string(Target t);
Target target_from_string(const std::string& s);

struct TrialReport {
  Method method = Method::kCp;
  Target target = Target::kJoint;
  Correction correction{};
  double alpha = 0.1;
  double coverage = 0.0;
  // Width statistics over the test samples of this trial. Angle width is the
  // full arc length in radians; std is the per-sample spread, which is
  // exactly zero for the fixed-width construction.
  double mean_angle_width = 0.0;
  double std_angle_width = 0.0;
  double mean_mag_width = 0.0;
  double std_mag_width = 0.0;
};

TrialReport evaluate_trial(Method method, Target target, Correction correction,
                           double alpha, std::span<const Sample> cal,
                           std::span<const Sample> test,
                           std::shared_ptr<const QuantileHeads> heads = {});

struct AggregateReport {
  Method method = Method::kCp;
  Target target = Target::kJoint;
  Correction correction{};
  double alpha = 0.1;
  int n_trials = 0;
  double mean_coverage = 0.0;
  double std_coverage = 0.0;  // across trials, population convention
  double mean_angle_width = 0.0;
  double std_angle_width = 0.0;  // across trials, of per-trial means
  double mean_mag_width = 0.0;
  double std_mag_width = 0.0;
};

struct ProtocolConfig {
  std::vector<Method> methods = {Method::kCp, Method::kCqr};
  std::vector<Target> targets = {Target::kJoint};
  // Applied to joint targets only; single-axis targets always run uncorrected.
  std::vector<CorrectionKind> corrections = {
      CorrectionKind::kNone, CorrectionKind::kBonferroni,
      CorrectionKind::kSidak, CorrectionKind::kMaxRank};
  std::vector<double> alphas = {0.3};
  int n_trials = 20;
  int n_cal = 500;
  int n_test = 2000;
  // Rows reserved at the head of the dataset for quantile-head training; the
  // trial splits never touch them, so calibration stays independent of the
  // model. Must be > 0 whenever kCqr is requested.
  int n_train = 2000;
  std::uint64_t seed = 7;
  TrainConfig train{};  // hyperparameters for the per-alpha quantile heads

  void validate(std::size_t n_samples) const;
};

struct ProtocolResult {
  std::vector<AggregateReport> aggregates;  // one per grid cell
  // trials[cell][trial], cell order matching aggregates.
  std::vector<std::vector<TrialReport>> trials;
};

// Trials run under OpenMP; per-trial randomness is derived from
// config.seed and the trial index alone, so scheduling cannot change any
// number. run_protocol_serial computes the identical result without the
// parallel loop.
ProtocolResult run_protocol(std::span<const Sample> data,
                            const ProtocolConfig& config);
ProtocolResult run_protocol_serial(std::span<const Sample> data,
                                   const ProtocolConfig& config);

// CSV summary, one row per grid cell. Angle widths are reported in degrees.
void write_results_csv(std::ostream& os, std::span<const AggregateReport> rows);

// Human-readable aligned table of the same rows.
void print_results_table(std::ostream& os, std::span<const AggregateReport> rows);

}  // namespace polarcp
