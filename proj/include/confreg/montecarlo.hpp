#pragma once

#include <cstdint>

#include "confreg/covariance.hpp"
#include "confreg/special.hpp"

namespace confreg {

// Reproducible sampling configuration. The stream is defined exactly so
// any implementation can replay it bit for bit:
//   - bit source: splitmix64 starting from `seed` (Steele/Vigna
//     constants: increment 0x9E3779B97F4A7C15 and the 30/27/31
//     xor-shift-multiply finalizer);
//   - uniforms: u = ((bits >> 11) + 1) * 2^-53 in (0, 1];
//   - normals: one variate per pair of consecutive uniforms (u1, u2),
//     z = sqrt(-2 ln u1) * cos(2 pi u2);
//   - sample k of dimension d consumes normals (k*d .. k*d + d - 1) in
//     axis order x, y, z, scaled by the spectrum's sigmas;
//   - single shard: samples are generated in index order.
struct McConfig {
  McConfig(std::int64_t samples, std::uint64_t seed, Probability confidence);

  std::int64_t samples;
  std::uint64_t seed;
  Probability confidence;
};

struct McQuantile {
  double radius_over_sigma_x;
  double std_error;
};

struct McProb {
  double p_hat;
  double std_error;
};

// Empirical confidence-quantile of the error radius over sigma_x.
// Quantile convention: order statistic at index ceil(p * N), 1-based,
// with no interpolation; the standard error comes from the order
// statistics at p +/- sqrt(p (1 - p) / N).
McQuantile mc_quantile(const EigenSpectrum& spec, const McConfig& cfg);

// Fraction of samples whose radius lies inside the given one, with the
// binomial standard error sqrt(p_hat (1 - p_hat) / N).
McProb mc_prob(const EigenSpectrum& spec, double radius_over_sigma_x,
               const McConfig& cfg);

namespace detail {

// splitmix64 step: advances the state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace detail

}  // namespace confreg
