#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

#include "algdist/region.hpp"

namespace algdist {

enum class DensityMethod : std::uint8_t { kClosedSmall, kClosedLarge, kClosedN2, kMonteCarlo, kPolar };

/// "closed-small", "closed-large", "closed-n2", "mc", "polar".
std::string_view to_string(DensityMethod m);

struct DensityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero exactly for closed forms
  DensityMethod method = DensityMethod::kClosedN2;
  std::uint64_t samples = 0;
};

/// Validity zones of the closed forms: |z| <= 1 - 1/sqrt2 and |z| >= 2 + sqrt2.
inline const double kSmallZoneRadius = 1.0 - 1.0 / std::sqrt(2.0);
inline const double kLargeZoneRadius = 2.0 + std::sqrt(2.0);

inline constexpr std::uint64_t kDefaultSamples = 1 << 16;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// The polytope D_z inside [-1,1]^{n-1}: coefficient vectors t whose forced
/// constant and linear coefficients |sum t_k u_k| and |sum t_k v_k| stay in [-1,1].
struct DzSpec {
  std::complex<double> z;
  int n = 2;
  std::vector<double> u;  // u_k = Im z^{k+1} / Im z
  std::vector<double> v;  // v_k = z (z^k - Im z^{k+1} / Im z), a real number
  std::vector<std::complex<double>> w;  // integrand form (k+1) z^k - Im z^{k+1} / Im z

  static DzSpec make(std::complex<double> z, int n);
  bool contains(const double* t) const;
  /// True when the constraints cannot bind anywhere in the box.
  bool is_full_box() const;
  /// |sum t_k w_k|^2.
  double integrand(const double* t) const;
  /// Integral over the last coordinate in [-1, 1] of the integrand restricted
  /// to D_z, with the first n-2 coordinates fixed to t.
  double line_integral(const double* t) const;
};

/// The region of the repulsion constant: |sum k t_k x0^{k+1}| <= 1 and
/// |sum (k+1) t_k x0^k| <= 1 inside the box.
struct RepulsionSpec {
  double x0 = 0.0;
  int n = 2;
  std::vector<double> c_const;  // k x0^{k+1}
  std::vector<double> c_lin;    // (k+1) x0^k
  std::vector<double> c_form;   // k (k+1) x0^{k-1}

  static RepulsionSpec make(double x0, int n);
  bool contains(const double* t) const;
  double integrand(const double* t) const;
  /// As DzSpec::line_integral.
  double line_integral(const double* t) const;
};

DensityEstimate psi_mc(std::complex<double> z, int n, std::uint64_t samples = kDefaultSamples,
                       std::uint64_t seed = kDefaultSeed);
/// Same integral through the polar-coordinate integrand; with equal
/// (samples, seed) it uses the same randomized point set as psi_mc.
DensityEstimate psi_polar(std::complex<double> z, int n, std::uint64_t samples = kDefaultSamples,
                          std::uint64_t seed = kDefaultSeed);
DensityEstimate psi_closed_small(std::complex<double> z, int n);
DensityEstimate psi_closed_large(std::complex<double> z, int n);
DensityEstimate psi_n2(std::complex<double> z);

enum class DensityChoice : std::uint8_t { kAuto, kMonteCarlo, kPolar };
/// kAuto: closed n=2 form, then the small/large closed forms, then psi_mc.
DensityEstimate psi(std::complex<double> z, int n, DensityChoice choice = DensityChoice::kAuto,
                    std::uint64_t samples = kDefaultSamples, std::uint64_t seed = kDefaultSeed);

DensityEstimate repulsion_constant(double x0, int n, std::uint64_t samples = kDefaultSamples,
                                   std::uint64_t seed = kDefaultSeed);

/// Integral of psi over the region. `budget` bounds the total number of
/// integrand evaluations, including the inner ones when psi itself needs
/// sampling; the standard error accounts for both levels.
DensityEstimate integrate_psi(const ComplexRegion& omega, int n, std::uint64_t budget = 1 << 22,
                              std::uint64_t seed = kDefaultSeed);

/// Riemann zeta at integers d >= 2.
double zeta(int d);

struct Prediction {
  double value = 0.0;
  double std_error = 0.0;
  DensityEstimate integral;
};

/// Q^{n+1} / (2 zeta(n+1)) times the integral of psi over the region.
Prediction predicted_count(double Q, int n, const ComplexRegion& omega, std::uint64_t budget = 1 << 22,
                           std::uint64_t seed = kDefaultSeed);
/// Same scaling applied to an integral computed elsewhere.
Prediction predicted_count(double Q, int n, const DensityEstimate& integral);

}  // namespace algdist
