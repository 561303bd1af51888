#include "confreg/approx.hpp"

#include <cmath>

namespace confreg {

FactorResult chi2_factor(int dim, Probability conf) {
  switch (dim) {
    case 2:
      return {chi_squared_factor(2, conf), Method::kChiSqApprox, conf,
              ShapeRatios::circle(1.0)};
    case 3: {
      FactorResult r = factor_3d_equal_sigma(conf);
      r.method = Method::kChiSqApprox;
      return r;
    }
    default:
      throw DimensionMismatch("chi2_factor requires dim 2 or 3");
  }
}

double diagonal_sum_radius(const CovarianceMatrix& cov, Probability conf) {
  return factor_1d(conf).factor * std::sqrt(cov.trace());
}

ComparisonReport compare(const ShapeRatios& rr, Probability conf) {
  if (rr.dim() != 2 && rr.dim() != 3) {
    throw DimensionMismatch("compare requires dim-2 or dim-3 ratios");
  }
  const FactorResult exact =
      rr.dim() == 2 ? factor_2d(rr, conf) : factor_3d(rr, conf);
  const FactorResult chi = chi2_factor(rr.dim(), conf);
  // trace / sigma_x^2 from the ratios alone
  const double trace_norm =
      rr.dim() == 2 ? 1.0 + rr.r() * rr.r()
                    : 1.0 + rr.m() * rr.m() + rr.n() * rr.n();
  const double diag = factor_1d(conf).factor * std::sqrt(trace_norm);
  return {exact, chi, diag, chi.factor / exact.factor - 1.0,
          diag / exact.factor - 1.0};
}

ComparisonReport compare(const CovarianceMatrix& cov, Probability conf) {
  if (cov.dim() != 2 && cov.dim() != 3) {
    throw DimensionMismatch("compare requires a 2x2 or 3x3 covariance");
  }
  return compare(ratios(decompose(cov)), conf);
}

}  // namespace confreg
