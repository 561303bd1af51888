#include "oracles.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace oracles {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  if (n % 2 != 0 || n < 2) throw std::invalid_argument("n must be even");
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (flo * f(hi) > 0.0) throw std::invalid_argument("no sign change");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off == 0.0) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(
            1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0)), theta);
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (eig[j] > eig[i]) std::swap(eig[i], eig[j]);
  return eig;
}

double disc_mass(double sigma_x, double sigma_y, double e, int nx, int ny) {
  const double cx = 1.0 / (2.0 * sigma_x * sigma_x);
  const double cy = 1.0 / (2.0 * sigma_y * sigma_y);
  const double norm = 1.0 / (2.0 * kPi * sigma_x * sigma_y);
  // Column integral at abscissa x, from -sqrt(e^2-x^2) to +sqrt(e^2-x^2);
  // even integrand, so one half doubled. The outer integral substitutes
  // x = e sin(alpha), which removes the sqrt corner at the rim.
  const auto column = [&](double half_height) {
    if (half_height <= 0.0) return 0.0;
    return 2.0 * simpson([&](double y) { return std::exp(-cy * y * y); }, 0.0,
                         half_height, ny);
  };
  const double integral = simpson(
      [&](double alpha) {
        const double x = e * std::sin(alpha);
        const double cosa = std::cos(alpha);
        return std::exp(-cx * x * x) * column(e * cosa) * e * cosa;
      },
      -0.5 * kPi, 0.5 * kPi, nx);
  return norm * integral;
}

}  // namespace oracles
