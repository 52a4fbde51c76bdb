#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/random/sobol.hpp>

namespace algdist {

/// Deterministic 64-bit generator for (seed, stream); independent streams
/// for distinct stream indices.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// SplitMix64 finalizer; a cheap counter-based source for per-point shifts.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double to_unit(std::uint64_t bits) { return std::ldexp(static_cast<double>(bits >> 11), -53); }

inline double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11), -53);
}

/// The first `count` points of the Sobol sequence in [0,1)^dim, row-major,
/// starting from the origin so that power-of-two prefixes are nets.
inline std::vector<double> sobol_points(unsigned dim, std::size_t count) {
  std::vector<double> pts(count * dim, 0.0);
  boost::random::sobol engine(dim);
  for (std::size_t i = dim; i < pts.size(); ++i) pts[i] = std::ldexp(static_cast<double>(engine()), -64);
  return pts;
}

inline std::size_t floor_pow2(std::uint64_t v) {
  std::size_t p = 1;
  while (p <= v / 2) p *= 2;
  return p;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t evaluations = 0;
};

/// Replicates and points per replicate for a total budget of `samples`;
/// the point count is a power of two.
struct RqmcLayout {
  std::size_t replicates = 1;
  std::size_t points = 1;

  static RqmcLayout for_budget(std::uint64_t samples, std::size_t max_replicates = 64) {
    RqmcLayout l;
    if (samples < 2) return l;
    l.replicates = static_cast<std::size_t>(std::clamp<std::uint64_t>(samples / 16, 2, max_replicates));
    l.points = floor_pow2(std::max<std::uint64_t>(1, samples / l.replicates));
    return l;
  }
};

/// Randomized quasi-Monte Carlo mean of f over [0,1)^dim: the same Sobol
/// points under independent uniform shifts (mod 1), one shift per replicate
/// drawn from stream `replicate` of `seed`. The standard error is the
/// spread of replicate means over sqrt(R); infinite for a single replicate.
/// f is called as f(const double* u, std::size_t replicate, std::size_t point).
template <class F>
McEstimate rqmc_mean(unsigned dim, RqmcLayout layout, std::uint64_t seed, F&& f) {
  const auto base = sobol_points(dim, layout.points);
  std::vector<double> means(layout.replicates);
  std::vector<double> u(dim);
  for (std::size_t r = 0; r < layout.replicates; ++r) {
    auto rng = make_stream(seed, r);
    std::vector<double> shift(dim);
    for (double& s : shift) s = uniform01(rng);
    double sum = 0.0;
    for (std::size_t j = 0; j < layout.points; ++j) {
      for (unsigned d = 0; d < dim; ++d) {
        double v = base[j * dim + d] + shift[d];
        u[d] = v >= 1.0 ? v - 1.0 : v;
      }
      sum += f(u.data(), r, j);
    }
    means[r] = sum / static_cast<double>(layout.points);
  }
  McEstimate est;
  est.evaluations = static_cast<std::uint64_t>(layout.replicates * layout.points);
  double m = 0.0;
  for (double v : means) m += v;
  m /= static_cast<double>(means.size());
  est.mean = m;
  if (means.size() < 2) {
    est.std_error = std::numeric_limits<double>::infinity();
    return est;
  }
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  est.std_error = std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
  return est;
}

}  // namespace algdist
