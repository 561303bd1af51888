#include "confreg/special.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

namespace confreg {

Probability::Probability(double p) : p_(p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("confidence level must lie strictly inside (0, 1), got " +
                      std::to_string(p));
  }
}

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("max_subdivisions must be >= 1");
  }
}

namespace {

// Rational Chebyshev approximations for erf/erfc, W. J. Cody 1969
// (coefficients as distributed in netlib specfun); relative accuracy
// better than 1e-16 in each regime.
constexpr double kErfA[5] = {3.1611237438705656, 113.864154151050156,
                             377.485237685302021, 3209.37758913846947,
                             0.185777706184603153};
constexpr double kErfB[4] = {23.6012909523441209, 244.024637934444173,
                             1282.61652607737228, 2844.23683343917062};
constexpr double kErfC[9] = {
    0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
    298.635138197400131,  881.95222124176909,  1712.04761263407058,
    2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kErfD[8] = {15.7449261107098347, 117.693950891312499,
                             537.181101862009858, 1621.38957456669019,
                             3290.79923573345963, 4362.61909014324716,
                             3439.36767414372164, 1230.33935480374942};
constexpr double kErfP[6] = {0.305326634961232344, 0.360344899949804439,
                             0.125781726111229246, 0.0160837851487422766,
                             6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kErfQ[5] = {2.56852019228982242, 1.87295284992346047,
                             0.527905102951428412, 0.0605183413124413191,
                             0.00233520497626869185};

constexpr double kInvSqrtPi = 0.56418958354775628695;

// erfc for y in (0.46875, inf). Splits exp(-y^2) as in the reference code
// to keep the exponential accurate for large arguments.
double erfc_tail(double y) {
  if (y >= 26.543) return 0.0;
  double result;
  if (y <= 4.0) {
    double xnum = kErfC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kErfC[i]) * y;
      xden = (xden + kErfD[i]) * y;
    }
    result = (xnum + kErfC[7]) / (xden + kErfD[7]);
  } else {
    const double ysq = 1.0 / (y * y);
    double xnum = kErfP[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + kErfP[i]) * ysq;
      xden = (xden + kErfQ[i]) * ysq;
    }
    result = ysq * (xnum + kErfP[4]) / (xden + kErfQ[4]);
    result = (kInvSqrtPi - result) / y;
  }
  const double ysq = std::floor(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del) * result;
}

}  // namespace

double erf(double x) {
  const double y = std::fabs(x);
  if (y <= 0.46875) {
    const double ysq = y > 1.11e-16 ? y * y : 0.0;
    double xnum = kErfA[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + kErfA[i]) * ysq;
      xden = (xden + kErfB[i]) * ysq;
    }
    return x * (xnum + kErfA[3]) / (xden + kErfB[3]);
  }
  const double tail = erfc_tail(y);
  return x > 0.0 ? 1.0 - tail : tail - 1.0;
}

double erfc(double x) {
  if (x < -0.46875) return 2.0 - erfc_tail(-x);
  if (x <= 0.46875) return 1.0 - erf(x);
  return erfc_tail(x);
}

double erf_inv(double y) {
  if (!(y > -1.0) || !(y < 1.0)) {
    throw DomainError("erf_inv argument must lie in (-1, 1), got " +
                      std::to_string(y));
  }
  if (y == 0.0) return 0.0;

  // Winitzki's approximation as the seed (~3 digits), then Newton on erf.
  const double w = std::log1p(-y * y);
  constexpr double kA = 0.147;
  const double t1 = 2.0 / (3.141592653589793 * kA) + 0.5 * w;
  double x = std::sqrt(std::sqrt(t1 * t1 - w / kA) - t1);
  if (y < 0.0) x = -x;

  constexpr double kHalfSqrtPi = 0.88622692545275801365;
  for (int i = 0; i < 8; ++i) {
    const double step = (erf(x) - y) * kHalfSqrtPi * std::exp(x * x);
    x -= step;
    if (std::fabs(step) <= 1e-15 * std::max(1.0, std::fabs(x))) break;
  }
  return x;
}

double lower_incomplete_gamma_3half(double x) {
  if (x < 0.0) {
    throw DomainError("lower incomplete gamma requires x >= 0, got " +
                      std::to_string(x));
  }
  // gamma(3/2, x) = (sqrt(pi)/2) erf(sqrt(x)) - sqrt(x) exp(-x)
  constexpr double kHalfSqrtPi = 0.88622692545275801365;
  const double s = std::sqrt(x);
  return kHalfSqrtPi * erf(s) - s * std::exp(-x);
}

namespace {

// Gauss-Kronrod (7, 15) nodes and weights on [-1, 1] (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double err;
  double a;
  double b;
  double integral;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kWgk[i] * fsum;
    if (i % 2 == 1) gauss += kWg[i / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  return Segment{std::fabs(kronrod - gauss), a, b, kronrod};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (!(a <= b)) throw DomainError("integrate requires a <= b");
  if (a == b) return 0.0;

  std::priority_queue<Segment> segments;
  segments.push(gk15(f, a, b));
  double total = segments.top().integral;
  double total_err = segments.top().err;

  int subdivisions = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (++subdivisions > spec.max_subdivisions) {
      throw ToleranceNotReached(
          "adaptive quadrature exhausted " +
          std::to_string(spec.max_subdivisions) +
          " subdivisions (error estimate " + std::to_string(total_err) + ")");
    }
    const Segment worst = segments.top();
    segments.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval narrower than machine spacing; its estimate cannot improve.
      segments.push(Segment{0.0, worst.a, worst.b, worst.integral});
      continue;
    }
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.integral + right.integral - worst.integral;
    total_err += left.err + right.err - worst.err;
    segments.push(left);
    segments.push(right);
  }
  return total;
}

double find_root(const std::function<double(double)>& g, double lo, double hi,
                 double tol) {
  if (!(tol > 0.0)) throw DomainError("find_root tolerance must be positive");
  double a = lo, b = hi;
  double fa = g(a), fb = g(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NoSignChange("find_root bracket [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "] has g of one sign: g(lo)=" +
                       std::to_string(fa) + ", g(hi)=" + std::to_string(fb));
  }

  double c = a, fc = fa;
  double d = b - a, e = b - a;
  constexpr double kEps = 2.22e-16;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol1) {
      b += d;
    } else {
      b += xm > 0.0 ? tol1 : -tol1;
    }
    fb = g(b);
  }
  return b;
}

}  // namespace confreg
