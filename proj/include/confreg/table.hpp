#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "confreg/covariance.hpp"
#include "confreg/exact.hpp"

namespace confreg {

enum class Interpolation : std::uint8_t {
  kLinear = 0,
  kMonotoneCubic = 1,
};

const char* interpolation_name(Interpolation i);

// Gridded exact factors over ratio space for one confidence level.
// dim 2: values over r = 0, step, ..., 1.
// dim 3: lower triangle over (m, n) = (i*step, j*step) with j <= i,
// stored row-major at index i*(i+1)/2 + j; the full square follows by
// the m/n symmetry of the factor surface.
class FactorTable {
public:
  FactorTable(int dim, Probability confidence, double step,
              std::vector<double> values,
              Interpolation interp = Interpolation::kMonotoneCubic);

  int dim() const { return dim_; }
  Probability confidence() const { return confidence_; }
  double step() const { return step_; }
  Interpolation interpolation() const { return interp_; }
  int knots_per_axis() const { return intervals_ + 1; }
  const std::vector<double>& values() const { return values_; }

  // dim-3 triangular accessor (i >= j not required; symmetric).
  double at(int i, int j) const;
  // dim-2 accessor.
  double at(int i) const;

  // Smallest increase between adjacent grid values along any axis; the
  // margin by which the grid clears the monotonicity invariant.
  double min_adjacent_increment() const;

private:
  void validate() const;

  int dim_;
  Probability confidence_;
  double step_;
  Interpolation interp_;
  int intervals_;
  std::vector<double> values_;
};

// Computes every grid value through the exact module and validates
// monotonicity along each axis before returning.
// step must divide 1 evenly (to 1e-12) and be >= 1e-3.
FactorTable build_table(int dim, Probability confidence, double step,
                        Interpolation interp = Interpolation::kMonotoneCubic);

// Interpolated factor at the given ratios (dims must match). Queries
// landing on a knot (to 1e-9 in index units) return the stored value.
FactorResult lookup(const FactorTable& table, const ShapeRatios& ratios);

// Binary format: magic "FTBL", u16 version, u8 dim, u8 interpolation,
// f64 confidence, f64 step, u64 count, count f64 values (all little
// endian), trailing CRC-32 of everything before it.
std::string serialize_binary(const FactorTable& table);
FactorTable deserialize_binary(std::string_view bytes);

// Text format: '#'-prefixed header lines (dim, confidence, step,
// interpolation), a column header, then one row per grid value with 17
// significant digits so the round trip is bit-exact.
std::string serialize_csv(const FactorTable& table);
FactorTable deserialize_csv(std::string_view text);

void save_table(const FactorTable& table, const std::string& path, bool binary);
// Sniffs the format from the leading magic bytes.
FactorTable load_table(const std::string& path);

}  // namespace confreg
