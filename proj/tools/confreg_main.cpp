#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "confreg/approx.hpp"
#include "confreg/exact.hpp"
#include "confreg/montecarlo.hpp"
#include "confreg/series.hpp"
#include "confreg/table.hpp"

namespace {

using namespace confreg;

// Input and numeric failures leave through this, mapped to the exit-code
// contract: 2 input error, 3 numeric error, 4 verification failure.
struct CliFailure {
  int code;
  std::string message;
};

// factors, radii, errors: six significant digits, trailing zeros kept
std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

// echoed inputs (confidence, shapes, thresholds): compact form
std::string gnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string g3(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string pct(double fraction) {
  if (std::fabs(fraction) < 5e-7) fraction = 0.0;  // avoid "-0.000%"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f%%", fraction * 100.0);
  return buf;
}

// Accepts a fraction (0.95) or a percentage (95); exactly 1 is rejected
// as ambiguous (and invalid as a probability anyway).
Probability parse_confidence(double raw) {
  if (raw == 1.0) {
    throw CliFailure{2, "confidence 1 is ambiguous (1% or 100%?) and invalid"};
  }
  if (raw > 1.0 && raw < 100.0) raw /= 100.0;
  try {
    return Probability(raw);
  } catch (const Error& e) {
    throw CliFailure{2, e.what()};
  }
}

CovarianceMatrix load_covariance_cli(const std::string& path) {
  try {
    return load_covariance(path);
  } catch (const Error& e) {
    throw CliFailure{2, e.what()};
  }
}

CovarianceSeries load_series_cli(const std::string& path) {
  try {
    return load_series(path);
  } catch (const Error& e) {
    throw CliFailure{2, e.what()};
  }
}

FactorTable load_table_cli(const std::string& path) {
  try {
    return load_table(path);
  } catch (const Error& e) {
    throw CliFailure{3, e.what()};
  }
}

ShapeRatios shape_from_flags(int dim, std::optional<double> ratio,
                             std::optional<double> m, std::optional<double> n,
                             bool required) {
  try {
    if (dim == 1) {
      if (ratio || m || n) {
        throw CliFailure{2, "--ratio/--m/--n do not apply to --dim 1"};
      }
      return ShapeRatios::none();
    }
    if (dim == 2) {
      if (m || n) throw CliFailure{2, "use --ratio for --dim 2"};
      if (!ratio) {
        if (required) throw CliFailure{2, "--dim 2 requires --ratio"};
        return ShapeRatios::circle(1.0);
      }
      return ShapeRatios::circle(*ratio);
    }
    if (ratio) throw CliFailure{2, "use --m and --n for --dim 3"};
    if (!m || !n) {
      if (required) throw CliFailure{2, "--dim 3 requires --m and --n"};
      return ShapeRatios::sphere(1.0, 1.0);
    }
    return ShapeRatios::sphere(*m, *n);
  } catch (const Error& e) {
    throw CliFailure{2, e.what()};
  }
}

void print_shape(const ShapeRatios& rr) {
  if (rr.dim() == 2) {
    std::cout << "r " << gnum(rr.r()) << "\n";
  } else if (rr.dim() == 3) {
    std::cout << "m " << gnum(rr.m()) << "\n";
    std::cout << "n " << gnum(rr.n()) << "\n";
  }
}

struct FactorArgs {
  int dim = 0;
  double confidence = 0.0;
  std::optional<double> ratio, m, n;
  std::string method = "exact";
  std::string table_path;
};

void run_factor(const FactorArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  const bool chisq = a.method == "chisq";
  if (!a.table_path.empty() && chisq) {
    throw CliFailure{2, "--table applies to the exact method only"};
  }

  FactorResult result = [&] {
    if (chisq) {
      shape_from_flags(a.dim, a.ratio, a.m, a.n, false);  // validate only
      if (a.dim == 1) return factor_1d(conf);
      return chi2_factor(a.dim, conf);
    }
    const ShapeRatios rr = shape_from_flags(a.dim, a.ratio, a.m, a.n, true);
    if (!a.table_path.empty()) {
      const FactorTable table = load_table_cli(a.table_path);
      return lookup(table, rr);
    }
    switch (a.dim) {
      case 1: return factor_1d(conf);
      case 2: return factor_2d(rr, conf);
      default: return factor_3d(rr, conf);
    }
  }();

  std::cout << "factor " << g6(result.factor) << "\n";
  std::cout << "method " << method_name(result.method) << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
  print_shape(result.ratios);
}

RadiusMethod parse_method(const std::string& name) {
  if (name == "exact") return RadiusMethod::kExact;
  if (name == "chisq") return RadiusMethod::kChiSq;
  if (name == "diagonal") return RadiusMethod::kDiagonalSum;
  throw CliFailure{2, "unknown method '" + name + "'"};
}

struct RadiusArgs {
  std::string cov_path;
  double confidence = 0.0;
  std::string method = "exact";
  std::string table_path;
};

void run_radius(const RadiusArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  const RadiusMethod method = parse_method(a.method);
  if (!a.table_path.empty() && method != RadiusMethod::kExact) {
    throw CliFailure{2, "--table applies to the exact method only"};
  }
  const CovarianceMatrix cov = load_covariance_cli(a.cov_path);
  std::optional<FactorTable> table;
  if (!a.table_path.empty()) table = load_table_cli(a.table_path);

  const double radius =
      confidence_radius(cov, conf, method, table ? &*table : nullptr);
  const char* label = method == RadiusMethod::kExact ? "exact"
                      : method == RadiusMethod::kChiSq ? "chi-squared"
                                                       : "diagonal-sum";
  std::cout << "radius " << g6(radius) << "\n";
  std::cout << "method " << label << "\n";
  std::cout << "sigma_x " << g6(decompose(cov).sigma_x()) << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
}

struct CompareArgs {
  std::string cov_path;
  int dim = 0;
  double confidence = 0.0;
  std::optional<double> ratio, m, n;
};

void run_compare(const CompareArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  std::optional<CovarianceMatrix> cov;
  ShapeRatios rr = ShapeRatios::none();
  if (!a.cov_path.empty()) {
    if (a.dim != 0 || a.ratio || a.m || a.n) {
      throw CliFailure{2, "give either --cov or --dim with shape flags"};
    }
    cov = load_covariance_cli(a.cov_path);
    if (cov->dim() < 2) throw CliFailure{2, "compare needs a 2x2 or 3x3 covariance"};
    rr = ratios(decompose(*cov));
  } else {
    if (a.dim != 2 && a.dim != 3) {
      throw CliFailure{2, "compare needs --cov FILE or --dim {2|3}"};
    }
    rr = shape_from_flags(a.dim, a.ratio, a.m, a.n, true);
  }

  const ComparisonReport report = compare(rr, conf);
  const double sx = cov ? decompose(*cov).sigma_x() : 1.0;

  std::cout << "dim " << rr.dim() << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
  print_shape(rr);
  if (cov) std::cout << "sigma_x " << g6(sx) << "\n";
  const auto line = [&](const char* name, double factor,
                        std::optional<double> over) {
    std::cout << name << " factor " << g6(factor) << " (" << g3(factor) << ")";
    if (cov) std::cout << " radius " << g6(factor * sx);
    if (over) std::cout << " overestimation " << pct(*over);
    std::cout << "\n";
  };
  line("exact", report.exact.factor, std::nullopt);
  line("chi-squared", report.chi_sq.factor, report.overestimation_chi_sq);
  line("diagonal-sum", report.diagonal_sum, report.overestimation_diagonal);
}

struct TableArgs {
  int dim = 0;
  double confidence = 0.0;
  double step = 0.0;
  std::string out_path;
  std::string format = "csv";
  std::string interp = "monotone-cubic";
};

void run_table(const TableArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  if (a.format != "csv" && a.format != "bin") {
    throw CliFailure{2, "--format must be csv or bin"};
  }
  Interpolation interp;
  if (a.interp == "linear") {
    interp = Interpolation::kLinear;
  } else if (a.interp == "monotone-cubic") {
    interp = Interpolation::kMonotoneCubic;
  } else {
    throw CliFailure{2, "--interpolation must be linear or monotone-cubic"};
  }
  if (a.dim != 2 && a.dim != 3) throw CliFailure{2, "--dim must be 2 or 3"};
  if (!(a.step > 0.0)) throw CliFailure{2, "--step must be positive"};

  const FactorTable table = [&] {
    try {
      return build_table(a.dim, conf, a.step, interp);
    } catch (const DomainError& e) {
      throw CliFailure{2, e.what()};
    }
  }();
  save_table(table, a.out_path, a.format == "bin");

  std::cout << "wrote " << a.out_path << "\n";
  std::cout << "dim " << table.dim() << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
  std::cout << "step " << gnum(table.step()) << "\n";
  std::cout << "points " << table.values().size() << "\n";
  std::cout << "min-increment " << g6(table.min_adjacent_increment()) << "\n";
}

struct AvailabilityArgs {
  std::string series_path;
  double threshold = 0.0;
  double confidence = 0.0;
  std::string method = "exact";
  std::string table_path;
  bool verbose = false;
};

void run_availability(const AvailabilityArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  const RadiusMethod method = parse_method(a.method);
  if (!a.table_path.empty() && method != RadiusMethod::kExact) {
    throw CliFailure{2, "--table applies to the exact method only"};
  }
  const CovarianceSeries series = load_series_cli(a.series_path);
  std::optional<FactorTable> table;
  if (!a.table_path.empty()) table = load_table_cli(a.table_path);
  if (!(a.threshold >= 0.0)) throw CliFailure{2, "--threshold must be >= 0"};

  const AvailabilityResult result = evaluate_availability(
      series, a.threshold, conf, method, table ? &*table : nullptr);

  std::cout << "epochs " << series.size() << "\n";
  std::cout << "dim " << series.dim() << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
  std::cout << "method " << method_name(result.method) << "\n";
  std::cout << "threshold " << gnum(result.threshold) << "\n";
  if (a.verbose) {
    for (size_t k = 0; k < result.per_epoch_radius.size(); ++k) {
      std::cout << "epoch " << k << " radius " << g6(result.per_epoch_radius[k])
                << "\n";
    }
  }
  size_t met = 0;
  for (double r : result.per_epoch_radius) {
    if (r <= result.threshold) ++met;
  }
  std::cout << "met " << met << "\n";
  std::cout << "availability " << gnum(result.availability) << "\n";
}

struct McCheckArgs {
  std::string cov_path;
  double confidence = 0.0;
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

void run_mc_check(const McCheckArgs& a) {
  const Probability conf = parse_confidence(a.confidence);
  const CovarianceMatrix cov = load_covariance_cli(a.cov_path);
  const EigenSpectrum spec = decompose(cov);
  const McConfig cfg = [&] {
    try {
      return McConfig(a.samples, a.seed, conf);
    } catch (const Error& e) {
      throw CliFailure{2, e.what()};
    }
  }();

  const double exact_radius =
      confidence_radius(cov, conf, RadiusMethod::kExact);
  const McQuantile mc = mc_quantile(spec, cfg);
  const double mc_radius = mc.radius_over_sigma_x * spec.sigma_x();
  const double band = 3.0 * mc.std_error * spec.sigma_x();
  const bool pass = std::fabs(exact_radius - mc_radius) <= band;

  std::cout << "dim " << cov.dim() << "\n";
  std::cout << "confidence " << gnum(conf.value()) << "\n";
  std::cout << "samples " << a.samples << "\n";
  std::cout << "seed " << a.seed << "\n";
  std::cout << "exact-radius " << g6(exact_radius) << "\n";
  std::cout << "mc-radius " << g6(mc_radius) << "\n";
  std::cout << "std-error " << g6(mc.std_error * spec.sigma_x()) << "\n";
  std::cout << "verdict " << (pass ? "pass" : "fail") << "\n";
  if (!pass) {
    throw CliFailure{4, "exact radius deviates by more than 3 standard errors"};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Confidence-region radii for Gaussian error covariances"};
  app.require_subcommand(1);

  FactorArgs fa;
  auto* factor = app.add_subcommand(
      "factor", "Dimensionless factor on sigma_x for a confidence level");
  factor->add_option("--dim", fa.dim, "Dimension (1, 2 or 3)")
      ->required()
      ->check(CLI::Range(1, 3));
  factor->add_option("--confidence", fa.confidence, "Confidence (0.95 or 95)")
      ->required();
  factor->add_option("--ratio", fa.ratio, "sigma_y/sigma_x for dim 2");
  factor->add_option("--m", fa.m, "sigma_y/sigma_x for dim 3");
  factor->add_option("--n", fa.n, "sigma_z/sigma_x for dim 3");
  factor->add_option("--method", fa.method, "exact|chisq (default exact)")
      ->check(CLI::IsMember({"exact", "chisq"}));
  factor->add_option("--table", fa.table_path, "Lookup table instead of integration");

  RadiusArgs ra;
  auto* radius = app.add_subcommand(
      "radius", "Confidence-region radius of one covariance file");
  radius->add_option("--cov", ra.cov_path, "Covariance JSON file")->required();
  radius->add_option("--confidence", ra.confidence, "Confidence")->required();
  radius->add_option("--method", ra.method, "exact|chisq|diagonal")
      ->check(CLI::IsMember({"exact", "chisq", "diagonal"}));
  radius->add_option("--table", ra.table_path, "Lookup table for exact method");

  CompareArgs ca;
  auto* cmp = app.add_subcommand(
      "compare", "Exact factor against both approximations");
  cmp->add_option("--cov", ca.cov_path, "Covariance JSON file");
  cmp->add_option("--dim", ca.dim, "Dimension (2 or 3)");
  cmp->add_option("--confidence", ca.confidence, "Confidence")->required();
  cmp->add_option("--ratio", ca.ratio, "sigma_y/sigma_x for dim 2");
  cmp->add_option("--m", ca.m, "sigma_y/sigma_x for dim 3");
  cmp->add_option("--n", ca.n, "sigma_z/sigma_x for dim 3");

  TableArgs ta;
  auto* table = app.add_subcommand("table", "Generate a factor lookup table");
  table->add_option("--dim", ta.dim, "Dimension (2 or 3)")->required();
  table->add_option("--confidence", ta.confidence, "Confidence")->required();
  table->add_option("--step", ta.step, "Grid step (divides 1)")->required();
  table->add_option("--out", ta.out_path, "Output path")->required();
  table->add_option("--format", ta.format, "csv|bin (default csv)")
      ->check(CLI::IsMember({"csv", "bin"}));
  table->add_option("--interpolation", ta.interp,
                    "linear|monotone-cubic (default monotone-cubic)");

  AvailabilityArgs aa;
  auto* avail = app.add_subcommand(
      "availability", "Fraction of epochs meeting an accuracy threshold");
  avail->add_option("--series", aa.series_path, "Series JSON file")->required();
  avail->add_option("--threshold", aa.threshold, "Accuracy threshold")
      ->required();
  avail->add_option("--confidence", aa.confidence, "Confidence")->required();
  avail->add_option("--method", aa.method, "exact|chisq|diagonal");
  avail->add_option("--table", aa.table_path, "Lookup table for exact method");
  avail->add_flag("--verbose", aa.verbose, "Print per-epoch radii");

  McCheckArgs ma;
  auto* mc = app.add_subcommand(
      "mc-check", "Verify the exact radius against a Monte Carlo quantile");
  mc->add_option("--cov", ma.cov_path, "Covariance JSON file")->required();
  mc->add_option("--confidence", ma.confidence, "Confidence")->required();
  mc->add_option("--samples", ma.samples, "Sample count (default 1e6)");
  mc->add_option("--seed", ma.seed, "RNG seed (default 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (factor->parsed()) run_factor(fa);
    if (radius->parsed()) run_radius(ra);
    if (cmp->parsed()) run_compare(ca);
    if (table->parsed()) run_table(ta);
    if (avail->parsed()) run_availability(aa);
    if (mc->parsed()) run_mc_check(ma);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const ToleranceNotReached& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoSignChange& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const MonotonicityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
