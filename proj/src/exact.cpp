#include "confreg/exact.hpp"

#include <cmath>
#include <string>

namespace confreg {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kHalfSqrtPi = 0.88622692545275801365;
// (2 pi)^{3/2}
constexpr double kTwoPiPow3Half = 15.74960994572241956;

void require_radius(double e) {
  if (!(e >= 0.0)) {
    throw DomainError("radius in sigma_x units must be >= 0, got " +
                      std::to_string(e));
  }
}

// Radial part of the sphere integral: integral of exp(-A t^2 / 2) t^2
// over [0, U], in closed form. A >= 1 on the whole angular domain.
double radial_mass(double coeff, double radius) {
  const double s = std::sqrt(0.5 * coeff);
  return (kHalfSqrtPi / s * erf(radius * s) -
          radius * std::exp(-0.5 * coeff * radius * radius)) /
         coeff;
}

// Inner integral over the polar direction, t = cos(theta) in [0, 1]:
// integral of radial_mass(c + t^2 d, U) dt. When the quadratic term
// dominates (d > c) the substitution t = sqrt(c/d) tan(xi) spreads the
// narrow feature at t ~ sqrt(c/d) over an O(1) range.
double polar_mass(double c, double d, double radius,
                  const QuadratureSpec& spec) {
  if (d <= c) {
    return integrate(
        [&](double t) { return radial_mass(c + t * t * d, radius); }, 0.0, 1.0,
        spec);
  }
  const double t_scale = std::sqrt(c / d);
  const double xi_max = std::atan(1.0 / t_scale);
  const double flat = kHalfSqrtPi / (c * std::sqrt(0.5 * c));
  const double integral = integrate(
      [&](double xi) {
        const double cx = std::cos(xi);
        const double coeff = c / (cx * cx);
        return flat * cx * erf(radius * std::sqrt(0.5 * coeff)) -
               radius / c * std::exp(-0.5 * coeff * radius * radius);
      },
      0.0, xi_max, spec);
  return t_scale * integral;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kExact1D: return "exact-1d";
    case Method::kExact2D: return "exact-2d";
    case Method::kExact3D: return "exact-3d";
    case Method::kChiSqApprox: return "chi-squared";
    case Method::kDiagonalSumApprox: return "diagonal-sum";
  }
  return "unknown";
}

namespace detail {

double prob_circle_axes(double e, double r, const QuadratureSpec& spec) {
  require_radius(e);
  if (!(r > 0.0) || !(r <= 1.0)) {
    throw DomainError("prob_circle_axes requires 0 < r <= 1");
  }
  // The angular integral of the missed tail mass, after substituting
  // tan(phi) = r tan(psi) so the integrand stays O(1)-scaled down to
  // r -> 0, where it reduces to the Gaussian tail identity.
  const double r2 = r * r;
  const double tail = integrate(
      [&](double psi) {
        const double c = std::cos(psi);
        const double s = std::sin(psi);
        return std::exp(-0.5 * e * e / (c * c + r2 * s * s));
      },
      0.0, 0.5 * kPi, spec);
  return 1.0 - 2.0 / kPi * tail;
}

double prob_sphere_axes(double e, double ratio_y, double ratio_z,
                        const QuadratureSpec& spec) {
  require_radius(e);
  if (!(ratio_y > 0.0) || !(ratio_y <= 1.0) || !(ratio_z > 0.0) ||
      !(ratio_z <= 1.0)) {
    throw DomainError("prob_sphere_axes requires ratios in (0, 1]");
  }
  // Octant symmetry gives the factor 8; the azimuth is substituted as
  // tan(phi) = ratio_y tan(eta), which cancels the 1/ratio_y prefactor
  // and keeps the integrand resolvable for small ratios.
  QuadratureSpec inner = spec;
  inner.abs_tol = spec.abs_tol * 1e-2;
  inner.rel_tol = spec.rel_tol * 1e-2;
  const double my2 = ratio_y * ratio_y;
  const double inv_nz2 = 1.0 / (ratio_z * ratio_z);
  const double outer = integrate(
      [&](double eta) {
        const double ce = std::cos(eta);
        const double se = std::sin(eta);
        const double c = 1.0 / (ce * ce + my2 * se * se);
        return c * polar_mass(c, inv_nz2 - c, e, inner);
      },
      0.0, 0.5 * kPi, spec);
  return 8.0 / (ratio_z * kTwoPiPow3Half) * outer;
}

}  // namespace detail

double prob_1d(double e) {
  require_radius(e);
  return erf(e / kSqrt2);
}

double prob_2d(double e, const ShapeRatios& rr) {
  if (rr.dim() != 2) throw DimensionMismatch("prob_2d needs dim-2 ratios");
  require_radius(e);
  const double r = rr.r();
  if (r < kRatioCutoff) return prob_1d(e);
  if (r == 1.0) return -std::expm1(-0.5 * e * e);
  return detail::prob_circle_axes(e, r);
}

double prob_3d(double e, const ShapeRatios& rr) {
  if (rr.dim() != 3) throw DimensionMismatch("prob_3d needs dim-3 ratios");
  require_radius(e);
  const double m = rr.m(), n = rr.n();
  if (m < kRatioCutoff) return prob_1d(e);
  if (n < kRatioCutoff) return prob_2d(e, ShapeRatios::circle(m));
  if (m == 1.0 && n == 1.0) {
    return lower_incomplete_gamma_3half(0.5 * e * e) / kHalfSqrtPi;
  }
  return detail::prob_sphere_axes(e, m, n);
}

FactorResult factor_1d(Probability conf) {
  return {kSqrt2 * erf_inv(conf.value()), Method::kExact1D, conf,
          ShapeRatios::none()};
}

double chi_squared_factor(int dim, Probability conf) {
  switch (dim) {
    case 1:
      return kSqrt2 * erf_inv(conf.value());
    case 2:
      return std::sqrt(-2.0 * std::log1p(-conf.value()));
    case 3:
      return factor_3d_equal_sigma(conf).factor;
    default:
      throw DimensionMismatch("chi-squared factor requires dim 1, 2 or 3");
  }
}

namespace {

// Bracket [1D factor, equal-sigma chi-squared factor], widened past
// round-off so the root stays strictly interior at the shape extremes.
double solve_factor(const std::function<double(double)>& prob, int dim,
                    Probability conf) {
  const double lo = chi_squared_factor(1, conf) * (1.0 - 1e-9);
  const double hi = chi_squared_factor(dim, conf) * (1.0 + 1e-9) + 1e-12;
  return find_root([&](double e) { return prob(e) - conf.value(); }, lo, hi,
                   1e-9);
}

}  // namespace

FactorResult factor_2d(const ShapeRatios& rr, Probability conf) {
  if (rr.dim() != 2) throw DimensionMismatch("factor_2d needs dim-2 ratios");
  if (rr.r() < kRatioCutoff) {
    return {factor_1d(conf).factor, Method::kExact2D, conf, rr};
  }
  const double e = solve_factor([&](double x) { return prob_2d(x, rr); }, 2, conf);
  return {e, Method::kExact2D, conf, rr};
}

FactorResult factor_3d(const ShapeRatios& rr, Probability conf) {
  if (rr.dim() != 3) throw DimensionMismatch("factor_3d needs dim-3 ratios");
  if (rr.m() < kRatioCutoff) {
    return {factor_1d(conf).factor, Method::kExact3D, conf, rr};
  }
  if (rr.n() < kRatioCutoff) {
    const double e = factor_2d(ShapeRatios::circle(rr.m()), conf).factor;
    return {e, Method::kExact3D, conf, rr};
  }
  const double e = solve_factor([&](double x) { return prob_3d(x, rr); }, 3, conf);
  return {e, Method::kExact3D, conf, rr};
}

FactorResult factor_3d_equal_sigma(Probability conf) {
  const double target = kHalfSqrtPi * conf.value();
  double hi = 4.0;
  while (lower_incomplete_gamma_3half(hi) < target) hi *= 2.0;
  const double x = find_root(
      [&](double t) { return lower_incomplete_gamma_3half(t) - target; }, 0.0,
      hi, 1e-12);
  return {std::sqrt(2.0 * x), Method::kExact3D, conf, ShapeRatios::sphere(1.0, 1.0)};
}

}  // namespace confreg
