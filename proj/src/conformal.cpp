#include "polarcp/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "polarcp/errors.hpp"
#include "polarcp/scores.hpp"

namespace polarcp {

namespace {

void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError(std::string(where) + ": alpha must be in (0, 1)");
}

// Expanded quantile band on the angle axis, converted to an arc. Centers on
// the band midpoint; a negative expansion can invert the band, in which case
// the region collapses to its midpoint.
CircularInterval angle_band_to_arc(double lo, double hi, double q) {
  const double lo_x = lo - q;
  const double hi_x = hi + q;
  const double mid = 0.5 * (lo_x + hi_x);
  if (hi_x < lo_x) return CircularInterval(mid, 0.0);
  return CircularInterval(mid, 0.5 * (hi_x - lo_x));
}

Interval mag_band_to_interval(double lo, double hi, double q) {
  const double lo_x = lo - q;
  const double hi_x = hi + q;
  if (hi_x < lo_x) {
    const double mid = 0.5 * (lo_x + hi_x);
    return Interval(mid, mid);
  }
  return Interval(lo_x, hi_x);
}

}  // namespace

std::string to_string(Method m) {
  return m == Method::kCp ? "cp" : "cqr";
}

std::string to_string(CorrectionKind k) {
  switch (k) {
    case CorrectionKind::kNone: return "none";
    case CorrectionKind::kBonferroni: return "bonferroni";
    case CorrectionKind::kSidak: return "sidak";
    case CorrectionKind::kMaxRank: return "maxrank";
  }
  return "none";
}

Method method_from_string(const std::string& s) {
  if (s == "cp") return Method::kCp;
  if (s == "cqr") return Method::kCqr;
  throw ValidationError("unknown method '" + s + "' (expected cp or cqr)");
}

CorrectionKind correction_from_string(const std::string& s) {
  if (s == "none") return CorrectionKind::kNone;
  if (s == "bonferroni") return CorrectionKind::kBonferroni;
  if (s == "sidak") return CorrectionKind::kSidak;
  if (s == "maxrank") return CorrectionKind::kMaxRank;
  throw ValidationError("unknown correction '" + s +
                        "' (expected none, bonferroni, sidak or maxrank)");
}

double corrected_alpha(double alpha, const Correction& correction) {
  check_alpha(alpha, "corrected_alpha");
  if (correction.tests < 1)
    throw ValidationError("corrected_alpha: tests must be >= 1");
  const double k = static_cast<double>(correction.tests);
  switch (correction.kind) {
    case CorrectionKind::kNone:
    case CorrectionKind::kMaxRank:
      return alpha;
    case CorrectionKind::kBonferroni:
      return alpha / k;
    case CorrectionKind::kSidak:
      return 1.0 - std::pow(1.0 - alpha, 1.0 / k);
  }
  return alpha;
}

CircularInterval CpCalibrator::angle_interval(double pred_angle) const {
  return CircularInterval(pred_angle, q_angle);  // ctor caps at pi
}

Interval CpCalibrator::mag_interval(double pred_mag) const {
  return Interval(pred_mag - q_mag, pred_mag + q_mag);
}

CpCalibrator calibrate_cp(std::span<const Sample> cal, double alpha) {
  check_alpha(alpha, "calibrate_cp");
  if (cal.empty()) throw ValidationError("calibrate_cp: empty calibration set");
  std::vector<double> angle_scores, mag_scores;
  angle_scores.reserve(cal.size());
  mag_scores.reserve(cal.size());
  for (const Sample& s : cal) {
    angle_scores.push_back(cp_score(s.gt_angle, s.pred_angle, /*circular=*/true));
    mag_scores.push_back(cp_score(s.gt_mag, s.pred_mag));
  }
  CpCalibrator c;
  c.alpha = alpha;
  c.n_cal = static_cast<int>(cal.size());
  c.q_angle = adjusted_quantile(angle_scores, alpha);
  c.q_mag = adjusted_quantile(mag_scores, alpha);
  return c;
}

CircularInterval CqrCalibrator::angle_interval(const QuantilePrediction& p) const {
  return angle_band_to_arc(p.angle_lo, p.angle_hi, q_angle);
}

Interval CqrCalibrator::mag_interval(const QuantilePrediction& p) const {
  return mag_band_to_interval(p.mag_lo, p.mag_hi, q_mag);
}

CircularInterval CqrCalibrator::angle_interval(const Sample& s) const {
  return angle_interval(heads->predict(s.features));
}

Interval CqrCalibrator::mag_interval(const Sample& s) const {
  return mag_interval(heads->predict(s.features));
}

CqrCalibrator calibrate_cqr(std::shared_ptr<const QuantileHeads> heads,
                            std::span<const Sample> cal, double alpha) {
  check_alpha(alpha, "calibrate_cqr");
  if (!heads) throw ValidationError("calibrate_cqr: heads must not be null");
  if (cal.empty()) throw ValidationError("calibrate_cqr: empty calibration set");
  std::vector<double> angle_scores, mag_scores;
  angle_scores.reserve(cal.size());
  mag_scores.reserve(cal.size());
  for (const Sample& s : cal) {
    const QuantilePrediction p = heads->predict(s.features);
    angle_scores.push_back(cqr_score(s.gt_angle, p.angle_lo, p.angle_hi));
    mag_scores.push_back(cqr_score(s.gt_mag, p.mag_lo, p.mag_hi));
  }
  CqrCalibrator c;
  c.heads = std::move(heads);
  c.alpha = alpha;
  c.n_cal = static_cast<int>(cal.size());
  c.q_angle = adjusted_quantile(angle_scores, alpha);
  c.q_mag = adjusted_quantile(mag_scores, alpha);
  return c;
}

MaxRankThresholds max_rank_thresholds(std::span<const double> angle_scores,
                                      std::span<const double> mag_scores,
                                      double alpha) {
  check_alpha(alpha, "max_rank_thresholds");
  if (angle_scores.empty() || angle_scores.size() != mag_scores.size())
    throw ValidationError(
        "max_rank_thresholds: score vectors must be nonempty and equal size");

  const auto [a_min_it, a_max_it] =
      std::minmax_element(angle_scores.begin(), angle_scores.end());
  const auto [m_min_it, m_max_it] =
      std::minmax_element(mag_scores.begin(), mag_scores.end());
  const double a_min = *a_min_it, a_span = *a_max_it - *a_min_it;
  const double m_min = *m_min_it, m_span = *m_max_it - *m_min_it;

  std::vector<double> joint(angle_scores.size());
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const double a = a_span > 0.0 ? (angle_scores[i] - a_min) / a_span : 0.0;
    const double m = m_span > 0.0 ? (mag_scores[i] - m_min) / m_span : 0.0;
    joint[i] = std::max(a, m);
  }
  const double t = adjusted_quantile(joint, alpha);
  return {a_min + t * a_span, m_min + t * m_span};
}

bool joint_contains(const JointInterval& ji, double gt_angle, double gt_mag) {
  return circ_contains(ji.angle, gt_angle) && contains(ji.magnitude, gt_mag);
}

JointCalibrator JointCalibrator::calibrate(
    Method method, Correction correction, double alpha,
    std::span<const Sample> cal, std::shared_ptr<const QuantileHeads> heads) {
  check_alpha(alpha, "JointCalibrator::calibrate");
  if (cal.empty())
    throw ValidationError("JointCalibrator::calibrate: empty calibration set");
  if (method == Method::kCqr && !heads)
    throw ValidationError(
        "JointCalibrator::calibrate: cqr requires trained quantile heads");

  std::vector<double> angle_scores, mag_scores;
  angle_scores.reserve(cal.size());
  mag_scores.reserve(cal.size());
  for (const Sample& s : cal) {
    if (method == Method::kCp) {
      angle_scores.push_back(cp_score(s.gt_angle, s.pred_angle, /*circular=*/true));
      mag_scores.push_back(cp_score(s.gt_mag, s.pred_mag));
    } else {
      const QuantilePrediction p = heads->predict(s.features);
      angle_scores.push_back(cqr_score(s.gt_angle, p.angle_lo, p.angle_hi));
      mag_scores.push_back(cqr_score(s.gt_mag, p.mag_lo, p.mag_hi));
    }
  }

  JointCalibrator jc;
  jc.method_ = method;
  jc.correction_ = correction;
  jc.alpha_ = alpha;
  jc.n_cal_ = static_cast<int>(cal.size());
  jc.heads_ = std::move(heads);
  if (correction.kind == CorrectionKind::kMaxRank) {
    const MaxRankThresholds t = max_rank_thresholds(angle_scores, mag_scores, alpha);
    jc.t_angle_ = t.t_angle;
    jc.t_mag_ = t.t_mag;
  } else {
    const double a_eff = corrected_alpha(alpha, correction);
    jc.t_angle_ = adjusted_quantile(angle_scores, a_eff);
    jc.t_mag_ = adjusted_quantile(mag_scores, a_eff);
  }
  return jc;
}

JointInterval JointCalibrator::interval(const Sample& s) const {
  JointInterval ji;
  if (method_ == Method::kCp) {
    ji.angle = CircularInterval(s.pred_angle, t_angle_);
    ji.magnitude = Interval(s.pred_mag - t_mag_, s.pred_mag + t_mag_);
  } else {
    const QuantilePrediction p = heads_->predict(s.features);
    ji.angle = angle_band_to_arc(p.angle_lo, p.angle_hi, t_angle_);
    ji.magnitude = mag_band_to_interval(p.mag_lo, p.mag_hi, t_mag_);
  }
  return ji;
}

nlohmann::json JointCalibrator::to_json() const {
  return {{"method", to_string(method_)},
          {"correction", to_string(correction_.kind)},
          {"tests", correction_.tests},
          {"alpha", alpha_},
          {"n_cal", n_cal_},
          {"t_angle", t_angle_},
          {"t_mag", t_mag_}};
}

JointCalibrator JointCalibrator::from_json(
    const nlohmann::json& j, std::shared_ptr<const QuantileHeads> heads) {
  JointCalibrator jc;
  try {
    jc.method_ = method_from_string(j.at("method").get<std::string>());
    jc.correction_.kind =
        correction_from_string(j.at("correction").get<std::string>());
    jc.correction_.tests = j.at("tests").get<int>();
    jc.alpha_ = j.at("alpha").get<double>();
    jc.n_cal_ = j.at("n_cal").get<int>();
    jc.t_angle_ = j.at("t_angle").get<double>();
    jc.t_mag_ = j.at("t_mag").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("JointCalibrator::from_json: ") + e.what());
  }
  check_alpha(jc.alpha_, "JointCalibrator::from_json");
  if (jc.method_ == Method::kCqr && !heads)
    throw ValidationError(
        "JointCalibrator::from_json: cqr calibrator needs quantile heads");
  jc.heads_ = std::move(heads);
  return jc;
}

JointInterval joint_interval(Method method, Correction correction, double alpha,
                             std::span<const Sample> cal, const Sample& query,
                             std::shared_ptr<const QuantileHeads> heads) {
  return JointCalibrator::calibrate(method, correction, alpha, cal,
                                    std::move(heads))
      .interval(query);
}

}  // namespace polarcp
