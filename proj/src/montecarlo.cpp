#include "confreg/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace confreg {

McConfig::McConfig(std::int64_t samples_, std::uint64_t seed_,
                   Probability confidence_)
    : samples(samples_), seed(seed_), confidence(confidence_) {
  if (samples < 10'000 || samples > 1'000'000'000) {
    throw DomainError("sample count must lie in [1e4, 1e9], got " +
                      std::to_string(samples));
  }
}

namespace detail {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double uniform_open_closed(std::uint64_t& state) {
  return static_cast<double>((detail::splitmix64(state) >> 11) + 1) * 0x1.0p-53;
}

double normal(std::uint64_t& state) {
  const double u1 = uniform_open_closed(state);
  const double u2 = uniform_open_closed(state);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::vector<double> sample_radii(const EigenSpectrum& spec, const McConfig& cfg) {
  const int dim = spec.dim();
  const double inv_sx = 1.0 / spec.sigma_x();
  std::uint64_t state = cfg.seed;
  std::vector<double> radii(static_cast<size_t>(cfg.samples));
  for (auto& r : radii) {
    double sq = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double x = spec.sigma(a) * normal(state);
      sq += x * x;
    }
    r = std::sqrt(sq) * inv_sx;
  }
  return radii;
}

// 1-based ceil(p*N) order-statistic index, clamped to [1, N].
std::int64_t quantile_index(double p, std::int64_t n) {
  const auto k = static_cast<std::int64_t>(std::ceil(p * static_cast<double>(n)));
  return std::clamp<std::int64_t>(k, 1, n);
}

}  // namespace

McQuantile mc_quantile(const EigenSpectrum& spec, const McConfig& cfg) {
  std::vector<double> radii = sample_radii(spec, cfg);
  std::sort(radii.begin(), radii.end());

  const double p = cfg.confidence.value();
  const auto n = cfg.samples;
  const double q = radii[static_cast<size_t>(quantile_index(p, n) - 1)];

  const double se_p = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  const double lo = radii[static_cast<size_t>(quantile_index(p - se_p, n) - 1)];
  const double hi = radii[static_cast<size_t>(quantile_index(p + se_p, n) - 1)];
  return {q, 0.5 * (hi - lo)};
}

McProb mc_prob(const EigenSpectrum& spec, double radius_over_sigma_x,
               const McConfig& cfg) {
  if (!(radius_over_sigma_x >= 0.0)) {
    throw DomainError("radius must be >= 0");
  }
  std::uint64_t state = cfg.seed;
  const int dim = spec.dim();
  const double inv_sx = 1.0 / spec.sigma_x();
  const double r2 = radius_over_sigma_x * radius_over_sigma_x;
  std::int64_t inside = 0;
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    double sq = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double x = spec.sigma(a) * normal(state);
      sq += x * x;
    }
    if (sq * inv_sx * inv_sx <= r2) ++inside;
  }
  const double p_hat =
      static_cast<double>(inside) / static_cast<double>(cfg.samples);
  return {p_hat, std::sqrt(p_hat * (1.0 - p_hat) /
                           static_cast<double>(cfg.samples))};
}

}  // namespace confreg
