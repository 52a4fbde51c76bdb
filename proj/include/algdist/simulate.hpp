#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "algdist/region.hpp"
#include "algdist/roots.hpp"

namespace algdist {

/// Trials are grouped into fixed blocks; block b draws from stream b of the
/// seed, so results do not depend on how blocks are spread over threads.
inline constexpr std::uint64_t kSimulationBlock = 4096;

struct RandomPolySummary {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string region;
  /// per_k_count[k]: trials with exactly k certified roots in the region, k = 0..n.
  std::vector<std::uint64_t> per_k_count;
  std::vector<double> per_k_frequency;
  double mean_N = 0.0;
  double std_error = 0.0;
  /// Roots whose membership could not be certified; excluded from mean_N.
  std::uint64_t ambiguous_roots = 0;
  double ambiguous_rate = 0.0;  // ambiguous roots per trial
  std::uint64_t blocks = 0;
};

/// n+1 coefficients a_0..a_n, i.i.d. uniform on [-1, 1]; a zero leading
/// coefficient is redrawn.
std::vector<double> sample_poly(int n, std::mt19937_64& rng);

RandomPolySummary estimate_EN(const ComplexRegion& omega, int n, std::uint64_t trials, std::uint64_t seed,
                              unsigned threads = 1, const RootOptions& roots = {});

struct VolumeEstimate {
  /// volume[k] = 2^{n+1} P(N = k), k = 0..n, with binomial standard errors.
  std::vector<double> volume;
  std::vector<double> std_error;
};

VolumeEstimate volume_Ak_estimate(const RandomPolySummary& summary);
VolumeEstimate volume_Ak_estimate(const ComplexRegion& omega, int n, std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads = 1);

}  // namespace algdist
