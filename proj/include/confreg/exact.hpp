#pragma once

#include "confreg/covariance.hpp"
#include "confreg/special.hpp"

namespace confreg {

// Ratios below this are treated as exactly zero and the problem is
// reduced in dimension; the integrands lose resolution past this point
// and the limit is the lower-dimensional probability.
inline constexpr double kRatioCutoff = 1e-6;

enum class Method {
  kExact1D,
  kExact2D,
  kExact3D,
  kChiSqApprox,
  kDiagonalSumApprox,
};

const char* method_name(Method m);

// Dimensionless confidence-region radius: e = factor * sigma_x.
struct FactorResult {
  double factor;
  Method method;
  Probability confidence;
  ShapeRatios ratios;
};

// P(|X| < e sigma) for a zero-mean Gaussian: erf(e / sqrt(2)).
double prob_1d(double e_over_sigma);

// Probability mass of the principal-axis 2D Gaussian inside the circle
// of radius e_over_sigma_x * sigma_x.
double prob_2d(double e_over_sigma_x, const ShapeRatios& ratios);

// Probability mass of the principal-axis 3D Gaussian inside the sphere.
double prob_3d(double e_over_sigma_x, const ShapeRatios& ratios);

FactorResult factor_1d(Probability conf);
FactorResult factor_2d(const ShapeRatios& ratios, Probability conf);
FactorResult factor_3d(const ShapeRatios& ratios, Probability conf);

// Equal-sigma 3D factor via the incomplete-gamma route:
// solves gamma(3/2, x) = (sqrt(pi)/2) p, factor = sqrt(2 x).
FactorResult factor_3d_equal_sigma(Probability conf);

// Chi-squared equal-sigma factor of the given dimension; the upper
// envelope (and root bracket) for the exact factors.
double chi_squared_factor(int dim, Probability conf);

namespace detail {

// Angular quadratures with raw axis ratios: no degenerate-axis
// reduction and, for the sphere, no m >= n normalization. These are the
// verification surfaces for symmetry and closed-form cross-checks; the
// ratios must be positive.
double prob_circle_axes(double e_over_sigma_x, double r,
                        const QuadratureSpec& spec = {});
double prob_sphere_axes(double e_over_sigma_x, double ratio_y, double ratio_z,
                        const QuadratureSpec& spec = {});

}  // namespace detail

}  // namespace confreg
