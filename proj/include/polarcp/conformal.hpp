#pragma once

// Split-conformal calibration of joint angle x magnitude prediction regions.
// Two interval constructions share the calibration machinery: fixed-width
// bands around the point forecast (absolute residual scores) and adaptive
// bands around learned quantile heads (signed band-distance scores). Joint
// regions control simultaneous miscoverage with either a per-test level
// correction or a rank-based max score.

#include <memory>
#include <span>
#include <string>

#include <json.hpp>

#include "polarcp/dataset.hpp"
#include "polarcp/geometry.hpp"
#include "polarcp/quantreg.hpp"

namespace polarcp {

enum class Method { kCp, kCqr };
enum class CorrectionKind { kNone, kBonferroni, kSidak, kMaxRank };

std::string to_string(Method m);
std::string to_string(CorrectionKind k);
Method method_from_string(const std::string& s);
CorrectionKind correction_from_string(const std::string& s);

struct Correction {
  CorrectionKind kind = CorrectionKind::kNone;
  int tests = 2;  // angle and magnitude
};

// Per-test miscoverage that makes `tests` simultaneous intervals jointly
// valid at level alpha: alpha/k for Bonferroni, 1 - (1-alpha)^(1/k) for
// Sidak. kNone returns alpha unchanged; kMaxRank also returns alpha because
// its joint control lives in the score construction, not the level.
double corrected_alpha(double alpha, const Correction& correction);

// Fixed-width construction: one residual quantile per task, every interval
// has the same width.
struct CpCalibrator {
  double alpha = 0.1;  // per-test miscoverage used for the quantile
  int n_cal = 0;
  double q_angle = 0.0;  // radians, in [0, pi]
  double q_mag = 0.0;

  CircularInterval angle_interval(double pred_angle) const;
  Interval mag_interval(double pred_mag) const;
};

CpCalibrator calibrate_cp(std::span<const Sample> cal, double alpha);

// Adaptive construction: the calibration quantile of the band-distance score
// widens (or, when negative, tightens) the quantile heads' band.
struct CqrCalibrator {
  std::shared_ptr<const QuantileHeads> heads;
  double alpha = 0.1;
  int n_cal = 0;
  double q_angle = 0.0;  // can be negative: heads were too wide
  double q_mag = 0.0;

  CircularInterval angle_interval(const QuantilePrediction& p) const;
  Interval mag_interval(const QuantilePrediction& p) const;
  CircularInterval angle_interval(const Sample& s) const;
  Interval mag_interval(const Sample& s) const;
};

CqrCalibrator calibrate_cqr(std::shared_ptr<const QuantileHeads> heads,
                            std::span<const Sample> cal, double alpha);

struct MaxRankThresholds {
  double t_angle = 0.0;  // in the original score scale of each task
  double t_mag = 0.0;
};

// Joint calibration through ranks: min-max scale each task's scores to
// [0, 1], take the per-sample max, find its adjusted quantile, and map it
// back to both score scales. A task whose scores are all equal contributes
// scaled zeros and gets that constant back as its threshold.
MaxRankThresholds max_rank_thresholds(std::span<const double> angle_scores,
                                      std::span<const double> mag_scores,
                                      double alpha);

struct JointInterval {
  CircularInterval angle;
  Interval magnitude;
};

bool joint_contains(const JointInterval& ji, double gt_angle, double gt_mag);

// One calibrated (method, correction, alpha) cell: calibrate once, then map
// any sample to its joint region. For kCqr the caller supplies trained heads;
// calibration does not train.
class JointCalibrator {
 public:
  JointCalibrator() = default;

  static JointCalibrator calibrate(Method method, Correction correction,
                                   double alpha, std::span<const Sample> cal,
                                   std::shared_ptr<const QuantileHeads> heads = {});

  JointInterval interval(const Sample& s) const;

  Method method() const { return method_; }
  Correction correction() const { return correction_; }
  double alpha() const { return alpha_; }
  int n_cal() const { return n_cal_; }
  double angle_threshold() const { return t_angle_; }
  double mag_threshold() const { return t_mag_; }
  const std::shared_ptr<const QuantileHeads>& heads() const { return heads_; }

  // Round trips exactly (thresholds bit-for-bit). Heads are not embedded;
  // from_json for a kCqr calibrator needs them passed back in.
  nlohmann::json to_json() const;
  static JointCalibrator from_json(const nlohmann::json& j,
                                   std::shared_ptr<const QuantileHeads> heads = {});

 private:
  Method method_ = Method::kCp;
  Correction correction_{};
  double alpha_ = 0.1;
  int n_cal_ = 0;
  double t_angle_ = 0.0;
  double t_mag_ = 0.0;
  std::shared_ptr<const QuantileHeads> heads_;
};

// Convenience wrapper: calibrate and query in one call.
JointInterval joint_interval(Method method, Correction correction, double alpha,
                             std::span<const Sample> cal, const Sample& query,
                             std::shared_ptr<const QuantileHeads> heads = {});

}  // namespace polarcp
