#pragma once

#include <cstdint>
#include <vector>

#include "mmvd/kernel.hpp"

namespace mmvd {

/// Estimated eigenvalues of the degree-2 kernel's integral operator,
/// plus the limiting group proportions feeding the asymptotic sampler.
struct NullSpectrum {
  std::vector<double> eigenvalues;  // nonincreasing, nonnegative
  std::vector<double> rho;          // in (0,1), summing to 1
};

struct NullSample {
  std::vector<double> draws;
  int truncation = 0;
  std::uint64_t seed = 0;
};

/// Spectral estimate from the pooled Gram matrix: with H the pooled
/// centering matrix, M = H Lambda H estimates the centered kernel and
/// W = M .* M its square; the eigenvalues of (1/n) H W H estimate the
/// limiting weights. rho is taken as n_j / n.
NullSpectrum estimate_spectrum(const GramBlocks& gram);

/// Truncates the spectrum to the leading eigenvalues retaining the given
/// trace fraction (at least one term).
NullSpectrum truncate_spectrum(const NullSpectrum& spectrum,
                               double trace_fraction = 0.999);

/// Monte Carlo draws from the limiting law of the scaled statistic:
/// sum_p lambda_p { (k-2) Z_p + sum_j ( Y_jp^2 / rho_j
///                  - 2 sum_{l != j} sqrt(rho_l / rho_j) Y_jp Y_lp ) }
/// with Y_jp iid standard normal and Z_p = sum_j Y_jp^2 built from the
/// same normals.
NullSample sample_null(const NullSpectrum& spectrum, int k, int n_draws,
                       std::uint64_t seed);

/// Empirical (1 - alpha) quantile, higher-interpolation convention.
double critical_value(const NullSample& sample, double alpha);

/// Convenience: spectral-calibrated decision for an observed statistic.
/// Rejects iff n * T > critical value of the sampled limiting law.
struct SpectralDecision {
  double scaled_statistic;  // n * T
  double critical;
  bool reject;
};
SpectralDecision spectral_test(const GramBlocks& gram,
                               const GroupWeights& weights, double alpha,
                               int n_draws, std::uint64_t seed);

}  // namespace mmvd
