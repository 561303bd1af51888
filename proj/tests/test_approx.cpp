#include "confreg/approx.hpp"

#include <cmath>

#include <doctest.h>

#include "testutil.hpp"

using namespace confreg;

namespace {
const Probability kP95(0.95);
}

TEST_CASE("chi2_factor anchors") {
  CHECK(chi2_factor(2, kP95).factor ==
        Near(2.4477, 1e-4));
  CHECK(chi2_factor(3, kP95).factor ==
        Near(2.795, 2e-3));
  CHECK(chi2_factor(2, Probability(0.50)).factor ==
        Near(1.17741, 1e-5));
  CHECK(chi2_factor(2, kP95).method == Method::kChiSqApprox);
  CHECK_THROWS_AS(chi2_factor(1, kP95), DimensionMismatch);
  CHECK_THROWS_AS(chi2_factor(4, kP95), DimensionMismatch);
}

TEST_CASE("chi2_factor equals the exact factor at equal ratios") {
  for (double p = 0.2; p < 1.0; p += 0.15) {
    const Probability conf(p);
    CHECK(chi2_factor(2, conf).factor ==
          Near(factor_2d(ShapeRatios::circle(1.0), conf).factor, 1e-6));
    CHECK(chi2_factor(3, conf).factor ==
          Near(factor_3d(ShapeRatios::sphere(1.0, 1.0), conf).factor, 1e-6));
  }
}

TEST_CASE("diagonal_sum_radius") {
  const CovarianceMatrix iso2(2, {{1.0, 0.0}, {0.0, 1.0}});
  CHECK(diagonal_sum_radius(iso2, kP95) ==
        Near(2.77, 2e-3));

  const CovarianceMatrix iso3 = CovarianceMatrix::diagonal({1.0, 1.0, 1.0});
  CHECK(diagonal_sum_radius(iso3, kP95) ==
        Near(3.395, 1e-3));

  // trace invariance: any rotation of the covariance gives the same value
  const CovarianceMatrix plain(2, {{4.0, 0.0}, {0.0, 1.0}});
  const CovarianceMatrix rotated(2, {{2.5, 1.5}, {1.5, 2.5}});
  CHECK(diagonal_sum_radius(plain, kP95) ==
        doctest::Approx(diagonal_sum_radius(rotated, kP95)).epsilon(1e-14));
}

TEST_CASE("compare: reference overestimation figures") {
  // 2D, v = 3: chi-squared overestimates by ~18.2%
  const auto v3 = compare(ShapeRatios::circle(1.0 / std::sqrt(3.0)), kP95);
  CHECK(v3.overestimation_chi_sq ==
        Near(0.182, 5e-3));

  // 2D, r -> 0: 2.45/1.96 - 1 ~ 25%
  const auto flat = compare(ShapeRatios::circle(0.0), kP95);
  CHECK(flat.overestimation_chi_sq ==
        Near(0.249, 2e-3));

  // 2D, r = 1: diagonal-sum overestimates by ~13%
  const auto round = compare(ShapeRatios::circle(1.0), kP95);
  CHECK(round.overestimation_diagonal ==
        Near(0.1324, 2e-3));
  CHECK(round.overestimation_chi_sq ==
        Near(0.0, 1e-6));

  // 3D, m = n -> 0: 2.8/1.96 - 1 -> 42.6%
  const auto needle = compare(ShapeRatios::sphere(0.0, 0.0), kP95);
  CHECK(needle.overestimation_chi_sq ==
        Near(0.426, 2e-3));

  // 3D, m = n = 1: diagonal-sum overestimates by ~21.5%
  const auto ball = compare(ShapeRatios::sphere(1.0, 1.0), kP95);
  CHECK(ball.overestimation_diagonal ==
        Near(0.2144, 2e-3));
}

TEST_CASE("compare on a covariance matches the shape-level report") {
  const CovarianceMatrix cov(2, {{2.5, 1.5}, {1.5, 2.5}});  // sigmas 2, 1
  const auto by_cov = compare(cov, kP95);
  const auto by_shape = compare(ShapeRatios::circle(0.5), kP95);
  CHECK(by_cov.exact.factor ==
        doctest::Approx(by_shape.exact.factor).epsilon(1e-9));
  CHECK(by_cov.diagonal_sum ==
        doctest::Approx(by_shape.diagonal_sum).epsilon(1e-9));
  // normalized diagonal radius times sigma_x equals the direct API
  CHECK(by_cov.diagonal_sum * 2.0 ==
        doctest::Approx(diagonal_sum_radius(cov, kP95)).epsilon(1e-9));
  CHECK_THROWS_AS(compare(CovarianceMatrix(1, {{1.0}}), kP95),
                  DimensionMismatch);
}

TEST_CASE("overestimation is never negative") {
  for (double r = 0.0; r <= 1.0001; r += 0.1) {
    const auto rep = compare(ShapeRatios::circle(std::min(r, 1.0)), kP95);
    CHECK(rep.overestimation_chi_sq >= -1e-9);
    CHECK(rep.overestimation_diagonal >= -1e-9);
  }
  for (double m = 0.0; m <= 1.0001; m += 0.25) {
    for (double n = 0.0; n <= m + 1e-9; n += 0.25) {
      const auto rep = compare(
          ShapeRatios::sphere(std::min(m, 1.0), std::min(n, 1.0)), kP95);
      CHECK(rep.overestimation_chi_sq >= -1e-9);
      CHECK(rep.overestimation_diagonal >= -1e-9);
    }
  }
}

TEST_CASE("chi-squared overestimation decreases in r; diagonal peaks at r=1") {
  double prev = 1e9;
  double diag_at_1 = 0.0;
  for (double r = 0.0; r <= 1.0001; r += 0.1) {
    const auto rep = compare(ShapeRatios::circle(std::min(r, 1.0)), kP95);
    CHECK(rep.overestimation_chi_sq <= prev + 1e-9);
    prev = rep.overestimation_chi_sq;
    diag_at_1 = rep.overestimation_diagonal;
  }
  CHECK(prev == Near(0.0, 1e-6));
  // at 95% the diagonal-sum overestimation is maximal at r = 1
  for (double r = 0.0; r < 1.0; r += 0.1) {
    const auto rep = compare(ShapeRatios::circle(r), kP95);
    CHECK(rep.overestimation_diagonal <= diag_at_1 + 1e-9);
  }
}
