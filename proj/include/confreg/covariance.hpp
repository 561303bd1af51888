#pragma once

#include <array>
#include <vector>

#include "confreg/errors.hpp"

namespace confreg {

// Relative tolerance below which a slightly negative eigenvalue is
// treated as round-off and clamped to zero.
inline constexpr double kPsdTolerance = 1e-9;

// Symmetric positive-semidefinite error covariance, dim 1 to 3.
// Units are the caller's (length^2 or speed^2); the math never needs them.
class CovarianceMatrix {
public:
  // Validates symmetry, non-negative diagonal and positive
  // semidefiniteness (eigenvalues >= -kPsdTolerance * max|diagonal|).
  CovarianceMatrix(int dim, const std::vector<std::vector<double>>& rows);

  static CovarianceMatrix diagonal(const std::vector<double>& variances);

  int dim() const { return dim_; }
  double at(int i, int j) const { return m_[i][j]; }
  double trace() const;

private:
  int dim_;
  std::array<std::array<double, 3>, 3> m_{};
};

// Standard deviations along the principal error axes, sorted descending.
class EigenSpectrum {
public:
  // sigmas must be sorted descending, non-negative, with sigmas[0] > 0.
  explicit EigenSpectrum(const std::vector<double>& sigmas);

  int dim() const { return static_cast<int>(sigmas_.size()); }
  double sigma(int i) const { return sigmas_[i]; }
  double sigma_x() const { return sigmas_[0]; }
  const std::vector<double>& sigmas() const { return sigmas_; }

private:
  std::vector<double> sigmas_;
};

// Dimensionless shape of the error ellipse/ellipsoid.
// dim 2: r = sigma_y/sigma_x in [0,1] (v = 1/r^2 is its variance form).
// dim 3: m = sigma_y/sigma_x, n = sigma_z/sigma_x with 1 >= m >= n >= 0.
class ShapeRatios {
public:
  static ShapeRatios none();                     // dim 1
  static ShapeRatios circle(double r);           // dim 2
  static ShapeRatios sphere(double m, double n); // dim 3; swaps so m >= n

  int dim() const { return dim_; }
  double r() const;
  double v() const;  // 1/r^2; +inf when r == 0
  double m() const;
  double n() const;

private:
  ShapeRatios(int dim, double a, double b) : dim_(dim), a_(a), b_(b) {}
  int dim_;
  double a_;  // r (dim 2) or m (dim 3)
  double b_;  // n (dim 3)
};

// Principal-axis standard deviations of cov, sorted descending.
// 2x2 uses the closed-form quadratic, 3x3 the trigonometric closed form
// with a cyclic-Jacobi fallback near repeated-root degeneracies.
EigenSpectrum decompose(const CovarianceMatrix& cov);

// Shape ratios of a spectrum; dim 1 yields the empty ratio set.
ShapeRatios ratios(const EigenSpectrum& spec);

}  // namespace confreg
