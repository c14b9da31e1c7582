#pragma once

// Conformity scores and the finite-sample calibration quantile shared by both
// interval constructions.

#include <span>

namespace polarcp {

// Absolute residual between truth and point prediction. With circular = true
// the residual is the shortest arc distance, so scores stay in [0, pi].
double cp_score(double y, double y_hat, bool circular = false);

// Signed distance from y to the band [q_lo, q_hi]: positive outside, negative
// inside, zero on the boundary. q_lo > q_hi is accepted (crossed heads before
// the caller repairs them); the max() form handles it without special cases.
double cqr_score(double y, double q_lo, double q_hi);

// k-th smallest calibration score with k = ceil((1 - alpha) * (n + 1)), the
// rank that makes split calibration valid at miscoverage alpha. Equivalently
// the (1 - alpha)(1 + 1/n)-quantile of the empirical distribution. When the
// adjusted level reaches or exceeds 1 the maximum score is returned.
//
// Throws std::invalid_argument on an empty score set or alpha outside (0, 1).
double adjusted_quantile(std::span<const double> scores, double alpha);

}  // namespace polarcp
