#include "algdist/simulate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "algdist/parallel.hpp"
#include "algdist/poly.hpp"
#include "algdist/qmc.hpp"

namespace algdist {

namespace {

using Cx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct RootTally {
  int inside = 0;
  int ambiguous = 0;
};

class TrialClassifier {
 public:
  TrialClassifier(const ComplexRegion& omega, const RootOptions& options)
      : omega_(omega), options_(options), bbox_(omega.bounding_box()), pad_(1e-6 * (1.0 + omega.extent())) {}

  RootTally count(const std::vector<double>& a) const {
    const int n = static_cast<int>(a.size()) - 1;
    if (n == 2) return quadratic(a);
    if (n == 3) return cubic(a);
    return general(a);
  }

 private:
  void add(const CertifiedRoot& root, std::span<const double> a, RootTally& t) const {
    Membership m = classify(root, omega_);
    if (m == Membership::kAmbiguous && !root.low_precision) m = classify(refine(root, a, 1e6), omega_);
    t.inside += m == Membership::kInside;
    t.ambiguous += m == Membership::kAmbiguous;
  }

  /// Adds a conjugate pair found by a closed form, or falls back to the
  /// general solver when the pair is not cleanly certified.
  RootTally pair(Cx upper, const std::vector<double>& a) const {
    RootTally t;
    if (!bbox_.contains(upper, pad_) && !bbox_.contains(std::conj(upper), pad_)) return t;
    const double rad = residual_radius(a, upper);
    if (!(rad <= options_.target_radius) || std::abs(upper.imag()) <= rad) return general(a);
    add({upper, rad, static_cast<int>(a.size()) - 1, false, Precision::kDouble}, a, t);
    add({std::conj(upper), rad, static_cast<int>(a.size()) - 1, false, Precision::kDouble}, a, t);
    return t;
  }

  RootTally quadratic(const std::vector<double>& a) const {
    const double disc = a[1] * a[1] - 4.0 * a[2] * a[0];
    const double tol = 16.0 * kEps * (a[1] * a[1] + 4.0 * std::abs(a[2] * a[0]));
    if (disc > tol) return {};  // two distinct real roots
    if (disc >= -tol) return general(a);
    Cx roots[2];
    roots_detail::solve_quadratic(a[0], a[1], a[2], roots);
    return pair(roots[0].imag() > 0 ? roots[0] : roots[1], a);
  }

  RootTally cubic(const std::vector<double>& c) const {
    const double a = c[3], b = c[2], cc = c[1], d = c[0];
    const double t1 = 18.0 * a * b * cc * d, t2 = 4.0 * b * b * b * d, t3 = b * b * cc * cc, t4 = 4.0 * a * cc * cc * cc,
                 t5 = 27.0 * a * a * d * d;
    const double disc = t1 - t2 + t3 - t4 - t5;
    const double tol = 64.0 * kEps * (std::abs(t1) + std::abs(t2) + t3 + std::abs(t4) + t5);
    if (disc > tol) return {};  // three distinct real roots
    if (disc >= -tol) return general(c);
    Cx roots[3];
    roots_detail::solve_cubic_one_real(d, cc, b, a, roots);
    return pair(roots[1], c);
  }

  RootTally general(const std::vector<double>& a) const {
    RootTally t;
    for (const auto& root : find_roots(std::span<const double>(a), options_)) add(root, a, t);
    return t;
  }

  const ComplexRegion& omega_;
  RootOptions options_;
  BoundingBox bbox_;
  double pad_;
};

struct BlockTally {
  std::vector<std::uint64_t> per_k;
  std::uint64_t ambiguous = 0;
  std::uint64_t trials = 0;
  double sum_N = 0.0;
};

}  // namespace

std::vector<double> sample_poly(int n, std::mt19937_64& rng) {
  if (n < 2) throw std::domain_error("random polynomials need n >= 2");
  std::vector<double> a(static_cast<std::size_t>(n) + 1);
  for (double& c : a) c = 2.0 * uniform01(rng) - 1.0;
  while (a.back() == 0.0) a.back() = 2.0 * uniform01(rng) - 1.0;
  return a;
}

RandomPolySummary estimate_EN(const ComplexRegion& omega, int n, std::uint64_t trials, std::uint64_t seed,
                              unsigned threads, const RootOptions& roots) {
  if (n < 2 || n > 4 * kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(4 * kMaxDegree) + "]");
  if (trials < 1) throw std::domain_error("trials must be positive");
  const std::uint64_t blocks = (trials + kSimulationBlock - 1) / kSimulationBlock;
  std::vector<BlockTally> tallies(blocks);
  const TrialClassifier classifier(omega, roots);

  parallel_for(blocks, resolve_threads(threads), [&](std::size_t b, unsigned) {
    BlockTally& t = tallies[b];
    t.per_k.assign(static_cast<std::size_t>(n) + 1, 0);
    t.trials = std::min(kSimulationBlock, trials - b * kSimulationBlock);
    auto rng = make_stream(seed, b);
    for (std::uint64_t i = 0; i < t.trials; ++i) {
      RootTally r = classifier.count(sample_poly(n, rng));
      ++t.per_k[static_cast<std::size_t>(r.inside)];
      t.ambiguous += static_cast<std::uint64_t>(r.ambiguous);
      t.sum_N += r.inside;
    }
  });

  RandomPolySummary s;
  s.n = n;
  s.trials = trials;
  s.seed = seed;
  s.region = omega.to_string();
  s.blocks = blocks;
  s.per_k_count.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& t : tallies) {
    for (std::size_t k = 0; k < t.per_k.size(); ++k) s.per_k_count[k] += t.per_k[k];
    s.ambiguous_roots += t.ambiguous;
  }
  const double N = static_cast<double>(trials);
  double weighted = 0.0;
  for (std::size_t k = 0; k < s.per_k_count.size(); ++k) {
    s.per_k_frequency.push_back(static_cast<double>(s.per_k_count[k]) / N);
    weighted += static_cast<double>(k) * static_cast<double>(s.per_k_count[k]);
  }
  s.mean_N = weighted / N;
  s.ambiguous_rate = static_cast<double>(s.ambiguous_roots) / N;

  if (blocks >= 2) {
    // Batch means, weighting each block by its trial count.
    double ss = 0.0;
    for (const auto& t : tallies) {
      double m = t.sum_N / static_cast<double>(t.trials);
      ss += static_cast<double>(t.trials) * (m - s.mean_N) * (m - s.mean_N);
    }
    const double var_block = ss / static_cast<double>(blocks - 1);
    s.std_error = std::sqrt(var_block / N);
  } else {
    double second = 0.0;
    for (std::size_t k = 0; k < s.per_k_count.size(); ++k)
      second += static_cast<double>(k * k) * static_cast<double>(s.per_k_count[k]);
    const double var = trials > 1 ? (second - N * s.mean_N * s.mean_N) / (N - 1.0) : 0.0;
    s.std_error = trials > 1 ? std::sqrt(std::max(var, 0.0) / N) : std::numeric_limits<double>::infinity();
  }
  return s;
}

VolumeEstimate volume_Ak_estimate(const RandomPolySummary& summary) {
  VolumeEstimate v;
  const double scale = std::ldexp(1.0, summary.n + 1);
  const double N = static_cast<double>(summary.trials);
  for (double f : summary.per_k_frequency) {
    v.volume.push_back(scale * f);
    v.std_error.push_back(scale * std::sqrt(f * (1.0 - f) / N));
  }
  return v;
}

VolumeEstimate volume_Ak_estimate(const ComplexRegion& omega, int n, std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads) {
  return volume_Ak_estimate(estimate_EN(omega, n, trials, seed, threads));
}

}  // namespace algdist
