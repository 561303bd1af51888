#pragma once

#include "confreg/covariance.hpp"
#include "confreg/exact.hpp"

namespace confreg {

// Exact factor next to both conventional approximations, with the
// fractional excess radius of each. diagonal_sum is the trace-based
// radius normalized by sigma_x so the three columns are comparable.
struct ComparisonReport {
  FactorResult exact;
  FactorResult chi_sq;
  double diagonal_sum;
  double overestimation_chi_sq;
  double overestimation_diagonal;
};

// Equal-sigma factor from the chi-squared distribution with dim degrees
// of freedom: dim 2 is analytic, dim 3 goes through the incomplete gamma.
FactorResult chi2_factor(int dim, Probability conf);

// Radius of the simplest conventional method, in input units:
// 1D factor times the root of the covariance trace.
double diagonal_sum_radius(const CovarianceMatrix& cov, Probability conf);

ComparisonReport compare(const CovarianceMatrix& cov, Probability conf);

// Shape-level variant: compares at given ratios without a covariance.
ComparisonReport compare(const ShapeRatios& ratios, Probability conf);

}  // namespace confreg
