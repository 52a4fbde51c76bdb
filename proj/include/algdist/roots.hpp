#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "algdist/poly.hpp"
#include "algdist/region.hpp"

namespace algdist {

enum class Precision : std::uint8_t { kDouble, kDoubleDouble, kQuad };

/// An approximate root together with a radius such that the closed disk
/// |w - value| <= radius contains exactly one root of the source polynomial.
/// If that cannot be established (non-convergence, clustered roots) the root
/// is flagged `low_precision` and callers must treat it as undecided.
struct CertifiedRoot {
  std::complex<double> value;
  double radius = 0.0;
  int polynomial_degree = 0;
  bool low_precision = false;
  Precision precision = Precision::kDouble;
};

enum class Membership : std::uint8_t { kInside, kOutside, kAmbiguous };

struct RootOptions {
  double target_radius = 1e-12;
  int max_iterations = 500;
};

std::vector<CertifiedRoot> find_roots(const IntPolynomial& p, const RootOptions& options = {});
/// Real-coefficient variant, coefficients a_0..a_m with a_m != 0.
std::vector<CertifiedRoot> find_roots(std::span<const double> coeffs, const RootOptions& options = {});

/// Inside if the certification disk lies in the open region, Outside if it
/// misses the closure, Ambiguous otherwise (including low-precision roots).
Membership classify(const CertifiedRoot& root, const ComplexRegion& omega);

/// Newton refinement one rung up the precision ladder (double-double, then
/// 128-bit), until the radius has shrunk by `factor` or the ladder is
/// exhausted. Non-convergence sets `low_precision`.
CertifiedRoot refine(const CertifiedRoot& root, const IntPolynomial& p, double factor);
CertifiedRoot refine(const CertifiedRoot& root, std::span<const double> coeffs, double factor);

/// Rigorous-in-spirit residual radius deg * |p(v)| / |p'(v)|, inflated by a
/// running bound on the Horner rounding error. Infinite when |p'(v)| cannot
/// be separated from zero.
double residual_radius(std::span<const double> coeffs, std::complex<double> v);

namespace roots_detail {

/// Allocation-free solvers used by the enumeration hot loop. `out` must hold
/// degree entries. Return false if the iteration did not converge.
bool solve_quadratic(double a0, double a1, double a2, std::complex<double>* out);
bool aberth_ehrlich(std::span<const double> coeffs, std::complex<double>* out, int max_iterations);
/// Cubic with negative discriminant (one real root, one conjugate pair).
/// out[0] is the real root, out[1] the root with positive imaginary part.
void solve_cubic_one_real(double a0, double a1, double a2, double a3, std::complex<double>* out);

}  // namespace roots_detail

}  // namespace algdist
