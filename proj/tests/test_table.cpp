#include "confreg/table.hpp"

#include <cmath>
#include <random>

#include <doctest.h>

#include "testutil.hpp"

#include "confreg/approx.hpp"

using namespace confreg;

namespace {
const Probability kP95(0.95);

// shared across cases: building tables is the expensive part
const FactorTable& curve95() {
  static const FactorTable t = build_table(2, kP95, 0.01);
  return t;
}

const FactorTable& surface95() {
  static const FactorTable t = build_table(3, kP95, 0.05);
  return t;
}

}  // namespace

TEST_CASE("build_table validates the step") {
  CHECK_THROWS_AS(build_table(2, kP95, 0.03), DomainError);  // 0.03 does not divide 1
  CHECK_THROWS_AS(build_table(2, kP95, 0.0), DomainError);
  CHECK_THROWS_AS(build_table(2, kP95, 1e-4), DomainError);   // below 1e-3
  CHECK_THROWS_AS(build_table(4, kP95, 0.5), DimensionMismatch);
}

TEST_CASE("dim-2 curve endpoints and size") {
  const FactorTable& t = curve95();
  CHECK(t.values().size() == 101);
  CHECK(t.at(0) == Near(1.960, 1e-3));
  CHECK(t.at(100) == Near(2.448, 1e-3));
  CHECK(t.at(0) == Near(factor_1d(kP95).factor, 1e-6));
  CHECK(t.at(100) ==
        Near(chi_squared_factor(2, kP95), 1e-6));
  CHECK(t.min_adjacent_increment() > 0.0);
}

TEST_CASE("dim-3 surface endpoints and triangular size") {
  const FactorTable& t = surface95();
  CHECK(t.values().size() == 231);  // 21 * 22 / 2
  CHECK(t.at(0, 0) == Near(1.960, 1e-3));
  CHECK(t.at(20, 20) == Near(2.795, 2e-3));
  CHECK(t.min_adjacent_increment() > 0.0);
}

TEST_CASE("dim-2 curve at 50% ends on the analytic value") {
  const FactorTable t = build_table(2, Probability(0.50), 0.05);
  CHECK(t.at(t.knots_per_axis() - 1) ==
        Near(1.17741, 1e-4));
}

TEST_CASE("lookup hits stored values exactly on knots") {
  const FactorTable& t = curve95();
  for (int k : {0, 1, 37, 50, 99, 100}) {
    const double r = std::min(1.0, k * t.step());
    CHECK(lookup(t, ShapeRatios::circle(r)).factor == t.at(k));
  }
  const FactorTable& s = surface95();
  for (int i : {0, 3, 20}) {
    for (int j = 0; j <= i; j += 2) {
      const auto rr = ShapeRatios::sphere(std::min(1.0, i * s.step()),
                                          std::min(1.0, j * s.step()));
      CHECK(lookup(s, rr).factor == s.at(i, j));
    }
  }
}

TEST_CASE("lookup agrees with direct integration between knots") {
  const FactorTable& t = curve95();
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double r = ur(rng);
    const double direct = factor_2d(ShapeRatios::circle(r), kP95).factor;
    const double interp = lookup(t, ShapeRatios::circle(r)).factor;
    worst = std::max(worst, std::fabs(direct - interp));
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("symmetric queries read the same cell") {
  const FactorTable& s = surface95();
  const auto a = lookup(s, ShapeRatios::sphere(0.62, 0.31));
  const auto b = lookup(s, ShapeRatios::sphere(0.31, 0.62));
  CHECK(a.factor == b.factor);
}

TEST_CASE("monotone cubic never leaves the bracketing knot hull") {
  const FactorTable& t = curve95();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const double r = ur(rng);
    const int cell = std::min(static_cast<int>(r / t.step()), 99);
    const double lo = t.at(cell), hi = t.at(cell + 1);
    const double f = lookup(t, ShapeRatios::circle(r)).factor;
    CHECK(f >= lo - 1e-15);
    CHECK(f <= hi + 1e-15);
  }
}

TEST_CASE("linear interpolation variant") {
  const FactorTable t = build_table(2, kP95, 0.1, Interpolation::kLinear);
  const double mid = lookup(t, ShapeRatios::circle(0.55)).factor;
  CHECK(mid == doctest::Approx(0.5 * (t.at(5) + t.at(6))).epsilon(1e-12));
}

TEST_CASE("lookup rejects mismatched dimensions") {
  CHECK_THROWS_AS(lookup(curve95(), ShapeRatios::sphere(1.0, 0.5)),
                  DimensionMismatch);
  CHECK_THROWS_AS(lookup(surface95(), ShapeRatios::circle(0.5)),
                  DimensionMismatch);
}

TEST_CASE("binary round trip is bit-exact") {
  const std::string blob = serialize_binary(surface95());
  const FactorTable back = deserialize_binary(blob);
  CHECK(back.dim() == 3);
  CHECK(back.step() == surface95().step());
  CHECK(back.confidence().value() == kP95.value());
  CHECK(back.values() == surface95().values());
  CHECK(back.interpolation() == surface95().interpolation());
}

TEST_CASE("csv round trip is bit-exact") {
  const std::string text = serialize_csv(curve95());
  const FactorTable back = deserialize_csv(text);
  CHECK(back.values() == curve95().values());
  CHECK(back.step() == curve95().step());
  CHECK(back.dim() == 2);
}

TEST_CASE("corrupted streams are rejected") {
  std::string blob = serialize_binary(curve95());

  SUBCASE("truncated") {
    blob.resize(blob.size() / 2);
    CHECK_THROWS_AS(deserialize_binary(blob), FormatError);
  }
  SUBCASE("flipped payload byte breaks the checksum") {
    blob[40] = static_cast<char>(blob[40] ^ 0x5A);
    CHECK_THROWS_AS(deserialize_binary(blob), FormatError);
  }
  SUBCASE("bad magic") {
    blob[0] = 'X';
    CHECK_THROWS_AS(deserialize_binary(blob), FormatError);
  }
  SUBCASE("csv with a decreasing run violates monotonicity") {
    FactorTable t = curve95();
    std::string text = serialize_csv(t);
    // swap two interior factor values by rebuilding the text
    std::vector<double> vals = t.values();
    std::swap(vals[40], vals[60]);
    CHECK_THROWS_AS(
        FactorTable(2, kP95, 0.01, vals, Interpolation::kMonotoneCubic),
        MonotonicityViolation);
    (void)text;
  }
  SUBCASE("csv garbage") {
    CHECK_THROWS_AS(deserialize_csv("not a table"), FormatError);
    CHECK_THROWS_AS(deserialize_csv("# dim 2\n# step 0.5\nr,factor\nx,y\n"),
                    FormatError);
  }
}
