#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "polarcp/geometry.hpp"
#include "polarcp/scores.hpp"

using namespace polarcp;

namespace {

// Independent reference: full sort, rank k = ceil((1 - alpha) * (n + 1))
// clamped to [1, n].
double quantile_oracle(std::vector<double> scores, double alpha) {
  std::sort(scores.begin(), scores.end());
  const double n = static_cast<double>(scores.size());
  const double rank = (1.0 - alpha) * (n + 1.0);
  auto k = static_cast<long>(std::ceil(rank));
  k = std::clamp<long>(k, 1, static_cast<long>(scores.size()));
  return scores[k - 1];
}

}  // namespace

TEST_CASE("cp_score is an absolute or arc residual") {
  CHECK(cp_score(1.5, 1.2) == doctest::Approx(0.3));
  CHECK(cp_score(1.2, 1.5) == doctest::Approx(0.3));
  CHECK(cp_score(-1.0, 1.0) == doctest::Approx(2.0));
  CHECK(cp_score(-1.0, 1.0, true) == doctest::Approx(2.0));
  // Across the seam the arc residual is the short way around.
  CHECK(cp_score(3.1, -3.1, true) == doctest::Approx(kTwoPi - 6.2));
  CHECK(cp_score(3.1, -3.1, false) == doctest::Approx(6.2));
  CHECK(cp_score(0.7, 0.7, true) == 0.0);
}

TEST_CASE("cqr_score is the signed band distance") {
  CHECK(cqr_score(0.5, 1.0, 2.0) == doctest::Approx(0.5));    // below
  CHECK(cqr_score(2.5, 1.0, 2.0) == doctest::Approx(0.5));    // above
  CHECK(cqr_score(1.25, 1.0, 2.0) == doctest::Approx(-0.25)); // inside
  CHECK(cqr_score(1.0, 1.0, 2.0) == 0.0);                     // on the edge
  CHECK(cqr_score(2.0, 1.0, 2.0) == 0.0);
  // Crossed band: distance to the nearer violated bound, still finite.
  CHECK(cqr_score(1.5, 2.0, 1.0) == doctest::Approx(0.5));
}

TEST_CASE("adjusted_quantile frozen cases") {
  std::vector<double> one_to_nine(9);
  std::iota(one_to_nine.begin(), one_to_nine.end(), 1.0);
  CHECK(adjusted_quantile(one_to_nine, 0.1) == 9.0);

  // n = 99, alpha = 0.5: the adjusted rank is exactly 50; a floating-point
  // sloppy (1 - alpha)(1 + 1/n) * n evaluation overshoots to 51.
  std::vector<double> one_to_99(99);
  std::iota(one_to_99.begin(), one_to_99.end(), 1.0);
  CHECK(adjusted_quantile(one_to_99, 0.5) == 50.0);

  const std::vector<double> single{7.0};
  CHECK(adjusted_quantile(single, 0.5) == 7.0);
  CHECK(adjusted_quantile(single, 0.1) == 7.0);
  CHECK(adjusted_quantile(single, 0.9) == 7.0);

  std::vector<double> one_to_ten(10);
  std::iota(one_to_ten.begin(), one_to_ten.end(), 1.0);
  CHECK(adjusted_quantile(one_to_ten, 0.25) == 9.0);  // rank 8.25 -> 9th

  const std::vector<double> ties{1.0, 1.0, 1.0, 2.0, 2.0};
  CHECK(adjusted_quantile(ties, 0.3) == 2.0);  // rank 4.2 -> 5th
}

TEST_CASE("adjusted_quantile ignores input order") {
  std::vector<double> scores{5.0, 1.0, 4.0, 2.0, 3.0};
  const double q = adjusted_quantile(scores, 0.4);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(scores.begin(), scores.end(), rng);
    CHECK(adjusted_quantile(scores, 0.4) == q);
  }
}

TEST_CASE("adjusted_quantile rejects bad input") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(adjusted_quantile(empty, 0.5), std::invalid_argument);
  const std::vector<double> some{1.0, 2.0};
  CHECK_THROWS_AS(adjusted_quantile(some, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(adjusted_quantile(some, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(adjusted_quantile(some, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(adjusted_quantile(some, 1.7), std::invalid_argument);
}

TEST_CASE("adjusted_quantile matches the sort-based oracle") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> usize(1, 300);
  std::uniform_real_distribution<double> ualpha(0.01, 0.99);
  std::uniform_real_distribution<double> uval(-10.0, 10.0);
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = usize(rng);
    std::vector<double> scores(n);
    for (double& s : scores) s = uval(rng);
    if (rep % 3 == 0) {
      // Introduce ties.
      for (double& s : scores) s = std::round(s);
    }
    const double alpha = ualpha(rng);
    CHECK(adjusted_quantile(scores, alpha) == quantile_oracle(scores, alpha));
  }
}

TEST_CASE("adjusted_quantile never undershoots the guarantee rank") {
  // The returned threshold admits at least ceil((1-alpha)(n+1)) of the
  // calibration scores (capped at n), which is what the coverage proof needs.
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> usize(1, 200);
  std::uniform_real_distribution<double> ualpha(0.05, 0.95);
  std::normal_distribution<double> uval(0.0, 3.0);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = usize(rng);
    std::vector<double> scores(n);
    for (double& s : scores) s = uval(rng);
    const double alpha = ualpha(rng);
    const double q = adjusted_quantile(scores, alpha);
    const long admitted =
        std::count_if(scores.begin(), scores.end(), [&](double s) { return s <= q; });
    const long required = std::min<long>(
        n, static_cast<long>(std::ceil((1.0 - alpha) * (n + 1))));
    CHECK(admitted >= required);
  }
}
