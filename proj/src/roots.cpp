#include "algdist/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "algdist/precision.hpp"

namespace algdist {

namespace {

using Cx = std::complex<double>;
using precision::Complex;
using precision::DoubleDouble;
using precision::Quad;
using precision::Traits;

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Horner with magnitude sums S = sum |a_i||v|^i and S' = sum i|a_i||v|^{i-1}
// for the rounding-error allowance.
struct Evaluation {
  Cx p, dp;
  double s = 0.0, ds = 0.0;
};

Evaluation horner(std::span<const double> a, Cx v) {
  Evaluation e;
  const double av = std::abs(v);
  const int m = static_cast<int>(a.size()) - 1;
  e.p = a[static_cast<std::size_t>(m)];
  e.s = std::abs(a[static_cast<std::size_t>(m)]);
  for (int i = m - 1; i >= 0; --i) {
    e.dp = e.dp * v + e.p;
    e.ds = e.ds * av + e.s;
    e.p = e.p * v + a[static_cast<std::size_t>(i)];
    e.s = e.s * av + std::abs(a[static_cast<std::size_t>(i)]);
  }
  return e;
}

double radius_from(int m, double abs_p, double abs_dp, double err_p, double err_dp) {
  double den = abs_dp - err_dp;
  if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
  return m * (abs_p + err_p) / den;
}

template <class T>
struct HighEvaluation {
  Complex<T> p, dp;
};

template <class T>
HighEvaluation<T> horner_high(std::span<const double> a, const Complex<T>& z) {
  HighEvaluation<T> e;
  const int m = static_cast<int>(a.size()) - 1;
  e.p = Complex<T>(T(a[static_cast<std::size_t>(m)]), T(0.0));
  e.dp = Complex<T>(T(0.0), T(0.0));
  for (int i = m - 1; i >= 0; --i) {
    e.dp = e.dp * z + e.p;
    e.p = e.p * z + Complex<T>(T(a[static_cast<std::size_t>(i)]), T(0.0));
  }
  return e;
}

template <class T>
double radius_high(std::span<const double> a, Cx v) {
  const int m = static_cast<int>(a.size()) - 1;
  Evaluation mag = horner(a, v);  // only the magnitude sums are used
  auto e = horner_high<T>(a, Complex<T>(v));
  double fudge = 4.0 * (2 * m + 1) * Traits<T>::epsilon;
  return radius_from(m, precision::magnitude(e.p), precision::magnitude(e.dp), fudge * mag.s,
                     fudge * mag.ds);
}

template <class T>
std::optional<Cx> newton_high(std::span<const double> a, Cx start, int max_iterations) {
  Complex<T> z(start);
  for (int it = 0; it < max_iterations; ++it) {
    auto e = horner_high<T>(a, z);
    if (precision::magnitude(e.p) == 0.0) return z.to_std();
    if (precision::magnitude(e.dp) == 0.0) return std::nullopt;
    Complex<T> step = e.p / e.dp;
    z = z - step;
    Cx zs = z.to_std();
    if (!std::isfinite(zs.real()) || !std::isfinite(zs.imag())) return std::nullopt;
    if (precision::magnitude(step) <= 4.0 * Traits<T>::epsilon * std::abs(zs)) return zs;
  }
  // Newton can stall at the rounding floor without meeting the step test;
  // the caller judges the result by its residual radius.
  return z.to_std();
}

bool disks_overlap(const CertifiedRoot& a, const CertifiedRoot& b) {
  return std::abs(a.value - b.value) <= a.radius + b.radius;
}

}  // namespace

double residual_radius(std::span<const double> coeffs, std::complex<double> v) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  Evaluation e = horner(coeffs, v);
  double fudge = 4.0 * (2 * m + 1) * kEps;
  return radius_from(m, std::abs(e.p), std::abs(e.dp), fudge * e.s, fudge * e.ds);
}

namespace roots_detail {

bool solve_quadratic(double a0, double a1, double a2, std::complex<double>* out) {
  double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) {
    double re = -a1 / (2.0 * a2);
    double im = std::sqrt(-disc) / (2.0 * a2);
    out[0] = {re, im};
    out[1] = {re, -im};
    return true;
  }
  double sq = std::sqrt(disc);
  double q = -0.5 * (a1 + std::copysign(sq, a1));
  if (q == 0.0) {
    out[0] = out[1] = 0.0;
    return true;
  }
  out[0] = q / a2;
  out[1] = a0 / q;
  return true;
}

bool aberth_ehrlich(std::span<const double> a, std::complex<double>* z, int max_iterations) {
  const int m = static_cast<int>(a.size()) - 1;
  const double lead = std::abs(a[static_cast<std::size_t>(m)]);
  double r = std::pow(std::abs(a[0]) / lead, 1.0 / m);
  if (!(r > 0.0) || !std::isfinite(r)) r = 1.0;
  for (int k = 0; k < m; ++k) z[k] = std::polar(r, 2.0 * std::numbers::pi * k / m + 0.7);

  bool done[kMaxDegree * 4 + 1] = {};
  const double fudge = 8.0 * (2 * m + 1) * kEps;
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < m; ++i) {
      if (done[i]) continue;
      Evaluation e = horner(a, z[i]);
      if (std::abs(e.p) <= fudge * e.s) {
        done[i] = true;
        continue;
      }
      Cx ratio = e.dp == Cx(0.0, 0.0) ? Cx(1e-3 * (1.0 + std::abs(z[i])), 0.0) : e.p / e.dp;
      Cx s = 0.0;
      for (int j = 0; j < m; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      Cx w = ratio / (1.0 - ratio * s);
      z[i] -= w;
      if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) done[i] = true;
      else all_done = false;
    }
    if (all_done) return true;
  }
  return false;
}

void solve_cubic_one_real(double a0, double a1, double a2, double a3, std::complex<double>* out) {
  const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
  const double shift = b / 3.0;
  const double p = c - b * shift;
  const double q = d - c * shift + 2.0 * shift * shift * shift;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  double t;
  if (disc <= 0.0) {
    t = -std::cbrt(q);
  } else {
    double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
    t = u == 0.0 ? 0.0 : u - p / (3.0 * u);
  }
  double r = t - shift;
  for (int it = 0; it < 3; ++it) {
    double f = ((a3 * r + a2) * r + a1) * r + a0;
    double df = (3.0 * a3 * r + 2.0 * a2) * r + a1;
    if (df == 0.0) break;
    double step = f / df;
    r -= step;
    if (std::abs(step) <= kEps * std::abs(r)) break;
  }
  // Deflate to a3 x^2 + e1 x + e0 and polish the pair on the full cubic.
  const double e1 = a2 + a3 * r;
  const double e0 = a1 + e1 * r;
  Cx pair[2];
  solve_quadratic(e0, e1, a3, pair);
  Cx z = pair[0].imag() >= 0.0 ? pair[0] : pair[1];
  for (int it = 0; it < 2; ++it) {
    Cx f = ((a3 * z + a2) * z + a1) * z + a0;
    Cx df = (3.0 * a3 * z + 2.0 * a2) * z + a1;
    if (df == Cx(0.0, 0.0)) break;
    z -= f / df;
  }
  out[0] = r;
  out[1] = z;
  out[2] = std::conj(z);
}

}  // namespace roots_detail

CertifiedRoot refine(const CertifiedRoot& root, std::span<const double> coeffs, double factor) {
  const int m = static_cast<int>(coeffs.size()) - 1;
  const double target = std::isfinite(root.radius) ? root.radius / std::max(factor, 1.0) : 0.0;
  CertifiedRoot best = root;
  bool any_converged = false;

  auto try_rung = [&](Precision rung, auto tag) {
    using T = decltype(tag);
    auto v = newton_high<T>(coeffs, root.value, 200);
    if (!v) return;
    // A refinement that leaves the original isolation disk found a different root.
    if (std::isfinite(root.radius) && !root.low_precision && std::abs(*v - root.value) > root.radius * 1.000001 + 1e-300)
      return;
    any_converged = true;
    double rad = radius_high<T>(coeffs, *v);
    if (rad < best.radius || !std::isfinite(best.radius) || best.low_precision) {
      best.value = *v;
      best.radius = rad;
      best.precision = rung;
      best.low_precision = !std::isfinite(rad);
    }
  };

  if (root.precision < Precision::kDoubleDouble) try_rung(Precision::kDoubleDouble, DoubleDouble{});
  if (best.radius > target && root.precision < Precision::kQuad) try_rung(Precision::kQuad, Quad{});
  if (!any_converged) best.low_precision = true;
  best.polynomial_degree = m;
  return best;
}

CertifiedRoot refine(const CertifiedRoot& root, const IntPolynomial& p, double factor) {
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  return refine(root, std::span<const double>(c), factor);
}

std::vector<CertifiedRoot> find_roots(std::span<const double> coeffs, const RootOptions& options) {
  std::size_t size = coeffs.size();
  while (size > 0 && coeffs[size - 1] == 0.0) --size;
  if (size < 2) throw std::domain_error("find_roots: degree must be at least 1");
  const int m = static_cast<int>(size) - 1;
  if (m > kMaxDegree * 4) throw std::domain_error("find_roots: degree too large");

  std::size_t zeros = 0;
  while (coeffs[zeros] == 0.0) ++zeros;
  std::span<const double> reduced = coeffs.subspan(zeros, size - zeros);
  const int mr = m - static_cast<int>(zeros);

  std::vector<CertifiedRoot> roots;
  roots.reserve(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < zeros; ++i) roots.push_back({Cx(0.0, 0.0), 0.0, m, zeros > 1, Precision::kDouble});

  std::complex<double> buf[kMaxDegree * 4];
  bool converged = true;
  if (mr == 1) {
    buf[0] = -reduced[0] / reduced[1];
  } else if (mr == 2) {
    roots_detail::solve_quadratic(reduced[0], reduced[1], reduced[2], buf);
  } else if (mr >= 3) {
    converged = roots_detail::aberth_ehrlich(reduced, buf, options.max_iterations);
  }
  const std::size_t first = roots.size();
  for (int i = 0; i < mr; ++i) {
    CertifiedRoot r{buf[i], residual_radius(reduced, buf[i]), m, false, Precision::kDouble};
    roots.push_back(r);
  }

  auto isolated = [&](std::size_t i) {
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != i && disks_overlap(roots[i], roots[j])) return false;
    return true;
  };

  for (std::size_t i = first; i < roots.size(); ++i) {
    if (roots[i].radius > options.target_radius || !isolated(i) || !converged) {
      double factor = std::isfinite(roots[i].radius) ? roots[i].radius / options.target_radius : 1e300;
      CertifiedRoot start = roots[i];
      start.low_precision = true;  // lets the ladder move freely
      roots[i] = refine(start, reduced, factor);
      roots[i].polynomial_degree = m;
    }
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].radius > options.target_radius || !isolated(i)) roots[i].low_precision = true;
  }
  return roots;
}

std::vector<CertifiedRoot> find_roots(const IntPolynomial& p, const RootOptions& options) {
  if (p.degree() < 1) throw std::domain_error("find_roots: degree must be at least 1");
  std::vector<double> c(p.coeffs().begin(), p.coeffs().end());
  return find_roots(std::span<const double>(c), options);
}

Membership classify(const CertifiedRoot& root, const ComplexRegion& omega) {
  if (root.low_precision || !std::isfinite(root.radius)) return Membership::kAmbiguous;
  const double slack = 64.0 * kEps * (1.0 + std::abs(root.value) + omega.extent());
  if (!omega.bounding_box().contains(root.value, root.radius + slack)) return Membership::kOutside;
  double d = omega.distance_to_boundary(root.value);
  if (d <= root.radius + slack) return Membership::kAmbiguous;
  return omega.contains(root.value) ? Membership::kInside : Membership::kOutside;
}

}  // namespace algdist
