#include "confreg/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confreg {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<double, 2> eigenvalues_2x2(double a, double b, double c) {
  // Symmetric [[a, b], [b, c]]: mean of the diagonal plus/minus the
  // half-gap radius; the discriminant is a sum of squares.
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  return {mean + radius, mean - radius};
}

// Cyclic Jacobi rotations; used when the characteristic cubic is too
// close to a repeated root for the trigonometric form.
std::array<double, 3> eigenvalues_jacobi(std::array<std::array<double, 3>, 3> a) {
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30 * (1.0 + std::fabs(a[0][0]) + std::fabs(a[1][1]) +
                       std::fabs(a[2][2]))) {
      break;
    }
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = std::copysign(
            1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0)), theta);
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = cs * akp - sn * akq;
          a[k][q] = sn * akp + cs * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = cs * apk - sn * aqk;
          a[q][k] = sn * apk + cs * aqk;
        }
      }
    }
  }
  return {a[0][0], a[1][1], a[2][2]};
}

std::array<double, 3> eigenvalues_3x3(const std::array<std::array<double, 3>, 3>& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  if (p1 == 0.0) return {a[0][0], a[1][1], a[2][2]};

  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) +
                    (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);

  // B = (A - q I)/p; r = det(B)/2 lands in [-1, 1] up to round-off.
  std::array<std::array<double, 3>, 3> b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double detb = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                      b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                      b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = 0.5 * detb;

  if (std::fabs(r) > 1.0 - 1e-12) return eigenvalues_jacobi(a);

  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e1, e2, e3};
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(int dim,
                                   const std::vector<std::vector<double>>& rows)
    : dim_(dim) {
  if (dim < 1 || dim > 3) {
    throw DimensionMismatch("covariance dimension must be 1, 2 or 3, got " +
                            std::to_string(dim));
  }
  if (static_cast<int>(rows.size()) != dim) {
    throw DimensionMismatch("expected " + std::to_string(dim) + " rows, got " +
                            std::to_string(rows.size()));
  }
  for (int i = 0; i < dim; ++i) {
    if (static_cast<int>(rows[i].size()) != dim) {
      throw DimensionMismatch("row " + std::to_string(i) + " has " +
                              std::to_string(rows[i].size()) + " entries, expected " +
                              std::to_string(dim));
    }
    for (int j = 0; j < dim; ++j) {
      if (!std::isfinite(rows[i][j])) {
        throw DomainError("covariance entries must be finite");
      }
      m_[i][j] = rows[i][j];
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (m_[i][i] < 0.0) {
      throw NotPositiveSemidefinite("diagonal entry (" + std::to_string(i) +
                                    "," + std::to_string(i) + ") is negative");
    }
    for (int j = i + 1; j < dim; ++j) {
      if (m_[i][j] != m_[j][i]) {
        throw NotPositiveSemidefinite("matrix is not symmetric at (" +
                                      std::to_string(i) + "," +
                                      std::to_string(j) + ")");
      }
    }
  }

  double scale = 0.0;
  for (int i = 0; i < dim; ++i) scale = std::max(scale, std::fabs(m_[i][i]));
  double min_eig = m_[0][0];
  if (dim == 2) {
    min_eig = eigenvalues_2x2(m_[0][0], m_[0][1], m_[1][1])[1];
  } else if (dim == 3) {
    const auto eig = eigenvalues_3x3(m_);
    min_eig = std::min({eig[0], eig[1], eig[2]});
  }
  if (min_eig < -kPsdTolerance * scale) {
    throw NotPositiveSemidefinite("smallest eigenvalue " +
                                  std::to_string(min_eig) +
                                  " is below the round-off tolerance");
  }
}

CovarianceMatrix CovarianceMatrix::diagonal(const std::vector<double>& variances) {
  const int dim = static_cast<int>(variances.size());
  std::vector<std::vector<double>> rows(dim, std::vector<double>(dim, 0.0));
  for (int i = 0; i < dim; ++i) rows[i][i] = variances[i];
  return CovarianceMatrix(dim, rows);
}

double CovarianceMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += m_[i][i];
  return t;
}

EigenSpectrum::EigenSpectrum(const std::vector<double>& sigmas) : sigmas_(sigmas) {
  if (sigmas_.empty() || sigmas_.size() > 3) {
    throw DimensionMismatch("spectrum must hold 1 to 3 standard deviations");
  }
  for (size_t i = 0; i < sigmas_.size(); ++i) {
    if (!(sigmas_[i] >= 0.0) || !std::isfinite(sigmas_[i])) {
      throw DomainError("standard deviations must be finite and non-negative");
    }
    if (i > 0 && sigmas_[i] > sigmas_[i - 1]) {
      throw DomainError("standard deviations must be sorted descending");
    }
  }
  if (sigmas_[0] <= 0.0) {
    throw DegenerateCovariance("largest standard deviation is zero");
  }
}

ShapeRatios ShapeRatios::none() { return ShapeRatios(1, 0.0, 0.0); }

ShapeRatios ShapeRatios::circle(double r) {
  if (!(r >= 0.0) || !(r <= 1.0)) {
    throw DomainError("ratio r must lie in [0, 1], got " + std::to_string(r));
  }
  return ShapeRatios(2, r, 0.0);
}

ShapeRatios ShapeRatios::sphere(double m, double n) {
  if (!(m >= 0.0) || !(m <= 1.0) || !(n >= 0.0) || !(n <= 1.0)) {
    throw DomainError("ratios m, n must lie in [0, 1]");
  }
  if (m < n) std::swap(m, n);
  return ShapeRatios(3, m, n);
}

double ShapeRatios::r() const {
  if (dim_ != 2) throw DimensionMismatch("r is defined for dim-2 ratios only");
  return a_;
}

double ShapeRatios::v() const {
  if (dim_ != 2) throw DimensionMismatch("v is defined for dim-2 ratios only");
  return 1.0 / (a_ * a_);
}

double ShapeRatios::m() const {
  if (dim_ != 3) throw DimensionMismatch("m is defined for dim-3 ratios only");
  return a_;
}

double ShapeRatios::n() const {
  if (dim_ != 3) throw DimensionMismatch("n is defined for dim-3 ratios only");
  return b_;
}

EigenSpectrum decompose(const CovarianceMatrix& cov) {
  double scale = 0.0;
  for (int i = 0; i < cov.dim(); ++i)
    scale = std::max(scale, std::fabs(cov.at(i, i)));

  std::vector<double> eig;
  switch (cov.dim()) {
    case 1:
      eig = {cov.at(0, 0)};
      break;
    case 2: {
      const auto e = eigenvalues_2x2(cov.at(0, 0), cov.at(0, 1), cov.at(1, 1));
      eig = {e[0], e[1]};
      break;
    }
    default: {
      std::array<std::array<double, 3>, 3> a{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = cov.at(i, j);
      const auto e = eigenvalues_3x3(a);
      eig = {e[0], e[1], e[2]};
      break;
    }
  }
  std::sort(eig.begin(), eig.end(), std::greater<double>());

  std::vector<double> sigmas(eig.size());
  for (size_t i = 0; i < eig.size(); ++i) {
    double lambda = eig[i];
    if (lambda < 0.0) {
      if (lambda < -kPsdTolerance * scale) {
        throw NotPositiveSemidefinite("eigenvalue " + std::to_string(lambda) +
                                      " is below the round-off tolerance");
      }
      lambda = 0.0;
    }
    sigmas[i] = std::sqrt(lambda);
  }
  if (sigmas[0] <= 0.0) {
    throw DegenerateCovariance("covariance has no positive eigenvalue");
  }
  return EigenSpectrum(sigmas);
}

ShapeRatios ratios(const EigenSpectrum& spec) {
  switch (spec.dim()) {
    case 1:
      return ShapeRatios::none();
    case 2:
      return ShapeRatios::circle(spec.sigma(1) / spec.sigma_x());
    default:
      return ShapeRatios::sphere(spec.sigma(1) / spec.sigma_x(),
                                 spec.sigma(2) / spec.sigma_x());
  }
}

}  // namespace confreg
