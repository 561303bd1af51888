#pragma once

#include <cmath>
#include <ostream>

// Absolute-tolerance comparator for CHECK(x == Near(want, abs_tol)).
// An optional relative part widens the band for large magnitudes.
struct Near {
  double value;
  double abs_tol;
  double rel_tol;

  explicit Near(double v, double abs_t, double rel_t = 0.0)
      : value(v), abs_tol(abs_t), rel_tol(rel_t) {}

  double band() const {
    return abs_tol > rel_tol * std::fabs(value) ? abs_tol
                                                : rel_tol * std::fabs(value);
  }

  friend bool operator==(double lhs, const Near& rhs) {
    return std::fabs(lhs - rhs.value) <= rhs.band();
  }
  friend bool operator==(const Near& lhs, double rhs) { return rhs == lhs; }
  friend bool operator!=(double lhs, const Near& rhs) { return !(lhs == rhs); }
  friend bool operator!=(const Near& lhs, double rhs) { return !(rhs == lhs); }

  friend std::ostream& operator<<(std::ostream& os, const Near& n) {
    return os << n.value << " +/- " << n.band();
  }
};
