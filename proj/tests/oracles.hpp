#pragma once

#include <functional>
#include <vector>

// Brute-force reference implementations used only by tests. Each is an
// independent route to a quantity the library computes some other way:
// nothing here calls into the library's quadrature, root finding or
// eigen code.
namespace oracles {

// Composite Simpson rule with n (even) panels.
double simpson(const std::function<double(double)>& f, double a, double b,
               int n);

// Plain bisection to an absolute tolerance on x.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol);

// Eigenvalues of a symmetric matrix (any small size) by cyclic Jacobi
// rotations, sorted descending.
std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a);

// Mass of the zero-mean Gaussian with principal standard deviations
// (sigma_x, sigma_y) inside the origin-centred disc of radius e.
// Cartesian double integral on a dense grid: Simpson columns in y with
// exact per-column limits, Simpson in x after x = e sin(alpha), which
// removes the sqrt corner at the rim. Accuracy ~1e-8 at the default
// grid for ratios down to ~0.1.
double disc_mass(double sigma_x, double sigma_y, double e, int nx = 4000,
                 int ny = 4000);

}  // namespace oracles
