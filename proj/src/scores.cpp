#include "polarcp/scores.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "polarcp/geometry.hpp"

namespace polarcp {

double cp_score(double y, double y_hat, bool circular) {
  if (circular) return circular_residual(y, y_hat);
  return std::abs(y - y_hat);
}

double cqr_score(double y, double q_lo, double q_hi) {
  return std::max(q_lo - y, y - q_hi);
}

double adjusted_quantile(std::span<const double> scores, double alpha) {
  if (scores.empty())
    throw std::invalid_argument("adjusted_quantile: empty calibration set");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("adjusted_quantile: alpha must be in (0, 1)");

  const auto n = static_cast<double>(scores.size());
  // Rank computed as (1 - alpha)(n + 1) rather than (1 - alpha)(1 + 1/n) * n:
  // the forms are algebraically equal but the latter can overshoot an exact
  // integer rank under floating point and ceil one element too high.
  const double rank = (1.0 - alpha) * (n + 1.0);
  std::vector<double> work(scores.begin(), scores.end());
  if (rank >= n) {
    return *std::max_element(work.begin(), work.end());
  }
  auto k = static_cast<std::size_t>(std::ceil(rank));
  k = std::clamp<std::size_t>(k, 1, work.size());
  std::nth_element(work.begin(), work.begin() + (k - 1), work.end());
  return work[k - 1];
}

}  // namespace polarcp
