#pragma once

#include <functional>

#include "confreg/errors.hpp"

namespace confreg {

// Confidence level, strictly inside (0, 1).
class Probability {
public:
  explicit Probability(double p);
  double value() const { return p_; }

private:
  double p_;
};

// Tolerances and budget for adaptive quadrature.
struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;

  void validate() const;
};

// Error function, |error| <= 1e-14 over the real line.
double erf(double x);

// Complementary error function 1 - erf(x).
double erfc(double x);

// Inverse of erf on (-1, 1); erf(erf_inv(y)) == y to 1e-12.
double erf_inv(double y);

// Lower incomplete gamma at a = 3/2: integral of exp(-t) sqrt(t) over [0, x].
double lower_incomplete_gamma_3half(double x);

// Adaptive Gauss-Kronrod (7, 15) integration of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Bracketed root of g on [lo, hi]; |result - root| <= tol.
// Brent-style: inverse-quadratic / secant steps, safeguarded by bisection.
double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol = 1e-9);

}  // namespace confreg
