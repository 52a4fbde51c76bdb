#include "algdist/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>

#include "algdist/poly.hpp"
#include "algdist/qmc.hpp"

namespace algdist {

namespace {

using Cx = std::complex<double>;

void check_point(Cx z, int n) {
  if (n < 2 || n > kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(kMaxDegree) + "]");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw std::domain_error("z must be finite");
  if (z.imag() == 0.0) throw std::domain_error("psi is defined off the real axis only");
}

void check_samples(std::uint64_t samples) {
  if (samples < 1) throw std::domain_error("samples must be positive");
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

/// 2^{n-1}/(3|y|) times the sum of |w_k|^2, weighted by |z|^{-4k-2} in the large zone.
double closed_sum(const DzSpec& dz, bool large) {
  const double y = std::abs(dz.z.imag());
  const double r2 = std::norm(dz.z);
  double s = 0.0;
  for (int k = 1; k < dz.n; ++k) {
    double term = std::norm(dz.w[static_cast<std::size_t>(k - 1)]);
    if (large) term *= std::pow(r2, -(2.0 * k + 1.0));
    s += term;
  }
  return std::ldexp(1.0, dz.n - 1) / (3.0 * y) * s;
}

/// Integral over s in [-1, 1] with |a0 + s a1| <= 1 and |b0 + s b1| <= 1 of
/// (p0 + s p1)^2 + (q0 + s q1)^2.
double slab_line_integral(double a0, double a1, double b0, double b1, double p0, double p1, double q0, double q1) {
  double lo = -1.0, hi = 1.0;
  auto clip = [&](double c0, double c1) {
    if (c1 == 0.0) {
      if (std::abs(c0) > 1.0) hi = lo;
      return;
    }
    double e0 = (-1.0 - c0) / c1, e1 = (1.0 - c0) / c1;
    if (e0 > e1) std::swap(e0, e1);
    lo = std::max(lo, e0);
    hi = std::min(hi, e1);
  };
  clip(a0, a1);
  clip(b0, b1);
  if (hi <= lo) return 0.0;
  const double c0 = p0 * p0 + q0 * q0, c1 = p0 * p1 + q0 * q1, c2 = p1 * p1 + q1 * q1;
  return c0 * (hi - lo) + c1 * (hi * hi - lo * lo) + c2 * (hi * hi * hi - lo * lo * lo) / 3.0;
}

/// RQMC mean of f over [0,1)^dim; with dim 0 a single exact evaluation.
template <class F>
McEstimate line_mean(unsigned dim, std::uint64_t samples, std::uint64_t seed, F&& f) {
  if (dim == 0) return {f(nullptr), 0.0, 1};
  return rqmc_mean(dim, RqmcLayout::for_budget(samples), seed, [&](const double* u, std::size_t, std::size_t) {
    return f(u);
  });
}

/// Inner estimate of psi at one point from a single random shift of a fixed
/// Sobol set; unbiased, used by the nested region integrator.
double psi_single_shift(const DzSpec& dz, const std::vector<double>& base, std::size_t count, std::uint64_t key) {
  const int dim = dz.n - 2;
  double shift[kMaxDegree];
  for (int d = 0; d < dim; ++d) shift[d] = to_unit(mix64(key + 0x632be59bd9b4e019ULL * static_cast<std::uint64_t>(d + 1)));
  double t[kMaxDegree];
  double sum = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    for (int d = 0; d < dim; ++d) {
      double v = base[j * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] + shift[d];
      t[d] = 2.0 * (v >= 1.0 ? v - 1.0 : v) - 1.0;
    }
    sum += dz.line_integral(t);
  }
  return std::ldexp(1.0, dim) / std::abs(dz.z.imag()) * sum / static_cast<double>(count);
}

}  // namespace

std::string_view to_string(DensityMethod m) {
  switch (m) {
    case DensityMethod::kClosedSmall: return "closed-small";
    case DensityMethod::kClosedLarge: return "closed-large";
    case DensityMethod::kClosedN2: return "closed-n2";
    case DensityMethod::kMonteCarlo: return "mc";
    case DensityMethod::kPolar: return "polar";
  }
  return "unknown";
}

DzSpec DzSpec::make(Cx z, int n) {
  check_point(z, n);
  DzSpec s;
  s.z = z;
  s.n = n;
  const double y = z.imag();
  Cx zk = z;  // z^k
  for (int k = 1; k < n; ++k) {
    Cx zk1 = zk * z;
    double ratio = zk1.imag() / y;
    s.u.push_back(ratio);
    s.v.push_back(zk1.real() - z.real() * ratio);
    s.w.push_back(static_cast<double>(k + 1) * zk - ratio);
    zk = zk1;
  }
  return s;
}

bool DzSpec::contains(const double* t) const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    a += t[k] * u[k];
    b += t[k] * v[k];
  }
  return std::abs(a) <= 1.0 && std::abs(b) <= 1.0;
}

bool DzSpec::is_full_box() const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    a += std::abs(u[k]);
    b += std::abs(v[k]);
  }
  return a <= 1.0 && b <= 1.0;
}

double DzSpec::integrand(const double* t) const {
  Cx s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += t[k] * w[k];
  return std::norm(s);
}

double DzSpec::line_integral(const double* t) const {
  const std::size_t last = w.size() - 1;
  double a = 0.0, b = 0.0;
  Cx s = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    a += t[k] * u[k];
    b += t[k] * v[k];
    s += t[k] * w[k];
  }
  return slab_line_integral(a, u[last], b, v[last], s.real(), w[last].real(), s.imag(), w[last].imag());
}

RepulsionSpec RepulsionSpec::make(double x0, int n) {
  if (n < 2 || n > kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(kMaxDegree) + "]");
  if (!std::isfinite(x0)) throw std::domain_error("x0 must be finite");
  RepulsionSpec s;
  s.x0 = x0;
  s.n = n;
  for (int k = 1; k < n; ++k) {
    s.c_const.push_back(k * std::pow(x0, k + 1));
    s.c_lin.push_back((k + 1) * std::pow(x0, k));
    s.c_form.push_back(static_cast<double>(k) * (k + 1) * std::pow(x0, k - 1));
  }
  return s;
}

bool RepulsionSpec::contains(const double* t) const {
  double a = 0.0, b = 0.0;
  for (std::size_t k = 0; k < c_const.size(); ++k) {
    a += t[k] * c_const[k];
    b += t[k] * c_lin[k];
  }
  return std::abs(a) <= 1.0 && std::abs(b) <= 1.0;
}

double RepulsionSpec::integrand(const double* t) const {
  double s = 0.0;
  for (std::size_t k = 0; k < c_form.size(); ++k) s += t[k] * c_form[k];
  return s * s;
}

double RepulsionSpec::line_integral(const double* t) const {
  const std::size_t last = c_form.size() - 1;
  double a = 0.0, b = 0.0, s = 0.0;
  for (std::size_t k = 0; k < last; ++k) {
    a += t[k] * c_const[k];
    b += t[k] * c_lin[k];
    s += t[k] * c_form[k];
  }
  return slab_line_integral(a, c_const[last], b, c_lin[last], s, c_form[last], 0.0, 0.0);
}

DensityEstimate psi_mc(Cx z, int n, std::uint64_t samples, std::uint64_t seed) {
  check_samples(samples);
  const DzSpec dz = DzSpec::make(z, n);
  const unsigned dim = static_cast<unsigned>(n - 2);
  double t[kMaxDegree];
  auto est = line_mean(dim, samples, seed, [&](const double* u) {
    for (unsigned d = 0; d < dim; ++d) t[d] = 2.0 * u[d] - 1.0;
    return dz.line_integral(t);
  });
  const double scale = std::ldexp(1.0, static_cast<int>(dim)) / std::abs(z.imag());
  return {est.mean * scale, est.std_error * scale, DensityMethod::kMonteCarlo, est.evaluations};
}

DensityEstimate psi_polar(Cx z, int n, std::uint64_t samples, std::uint64_t seed) {
  check_samples(samples);
  check_point(z, n);
  const double r = std::abs(z);
  const double alpha = std::arg(z);
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const unsigned dim = static_cast<unsigned>(n - 1);
  std::vector<double> re_form(dim), im_form(dim), c1(dim), c2(dim);
  for (unsigned i = 0; i < dim; ++i) {
    const int k = static_cast<int>(i) + 1;
    const double rk1 = std::pow(r, k - 1);
    const double s_next = std::sin((k + 1) * alpha);
    re_form[i] = rk1 * ((k + 1) * std::cos((k + 1) * alpha) - ca * s_next / sa);
    im_form[i] = rk1 * k * s_next;
    c1[i] = std::pow(r, k + 1) * std::sin(k * alpha) / sa;
    c2[i] = std::pow(r, k) * s_next / sa;
  }
  const unsigned outer = dim - 1;
  auto est = line_mean(outer, samples, seed, [&](const double* u) {
    double a = 0.0, b = 0.0, p = 0.0, q = 0.0;
    for (unsigned d = 0; d < outer; ++d) {
      const double t = 2.0 * u[d] - 1.0;
      a += t * c1[d];
      b += t * c2[d];
      p += t * re_form[d];
      q += t * im_form[d];
    }
    return slab_line_integral(a, c1[outer], b, c2[outer], p, re_form[outer], q, im_form[outer]);
  });
  // The polar form is a density in (r, alpha); dividing by the Jacobian r gives psi.
  const double scale = std::ldexp(1.0, static_cast<int>(outer)) * r / std::abs(sa);
  return {est.mean * scale, est.std_error * scale, DensityMethod::kPolar, est.evaluations};
}

DensityEstimate psi_closed_small(Cx z, int n) {
  check_point(z, n);
  if (std::abs(z) > kSmallZoneRadius) throw std::domain_error("closed-small requires |z| <= 1 - 1/sqrt2");
  return {closed_sum(DzSpec::make(z, n), false), 0.0, DensityMethod::kClosedSmall, 0};
}

DensityEstimate psi_closed_large(Cx z, int n) {
  check_point(z, n);
  if (std::abs(z) < kLargeZoneRadius) throw std::domain_error("closed-large requires |z| >= 2 + sqrt2");
  return {closed_sum(DzSpec::make(z, n), true), 0.0, DensityMethod::kClosedLarge, 0};
}

DensityEstimate psi_n2(Cx z) {
  check_point(z, 2);
  const double x = std::abs(z.real()), y = std::abs(z.imag());
  const double r2 = x * x + y * y;
  double value;
  if (r2 <= 1.0 && x <= 0.5) value = 8.0 * y / 3.0;
  else if ((x - 1.0) * (x - 1.0) + y * y <= 1.0 && x > 0.5) value = y / (3.0 * x * x * x);
  else value = 8.0 * y / (3.0 * r2 * r2 * r2);
  return {value, 0.0, DensityMethod::kClosedN2, 0};
}

DensityEstimate psi(Cx z, int n, DensityChoice choice, std::uint64_t samples, std::uint64_t seed) {
  switch (choice) {
    case DensityChoice::kMonteCarlo: return psi_mc(z, n, samples, seed);
    case DensityChoice::kPolar: return psi_polar(z, n, samples, seed);
    case DensityChoice::kAuto: break;
  }
  check_point(z, n);
  if (n == 2) return psi_n2(z);
  const double r = std::abs(z);
  if (r <= kSmallZoneRadius) return psi_closed_small(z, n);
  if (r >= kLargeZoneRadius) return psi_closed_large(z, n);
  return psi_mc(z, n, samples, seed);
}

DensityEstimate repulsion_constant(double x0, int n, std::uint64_t samples, std::uint64_t seed) {
  check_samples(samples);
  const RepulsionSpec spec = RepulsionSpec::make(x0, n);
  const unsigned dim = static_cast<unsigned>(n - 2);
  double t[kMaxDegree];
  auto est = line_mean(dim, samples, seed, [&](const double* u) {
    for (unsigned d = 0; d < dim; ++d) t[d] = 2.0 * u[d] - 1.0;
    return spec.line_integral(t);
  });
  const double scale = std::ldexp(1.0, static_cast<int>(dim));
  return {est.mean * scale, est.std_error * scale, DensityMethod::kMonteCarlo, est.evaluations};
}

DensityEstimate integrate_psi(const ComplexRegion& omega, int n, std::uint64_t budget, std::uint64_t seed) {
  if (n < 2 || n > kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(kMaxDegree) + "]");
  if (budget < 2) throw std::domain_error("budget must be at least 2");
  auto prims = omega.primitives();
  const std::size_t inner = n == 2 ? 1 : 256;
  const std::uint64_t outer_total = std::max<std::uint64_t>(2 * prims.size(), budget / inner);
  const auto inner_base = n == 2 ? std::vector<double>{} : sobol_points(static_cast<unsigned>(n - 2), inner);

  DensityEstimate total{0.0, 0.0, n == 2 ? DensityMethod::kClosedN2 : DensityMethod::kMonteCarlo, 0};
  double variance = 0.0;
  bool any_sampled_psi = false;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const std::uint64_t prim_seed = mix64(seed ^ mix64(i + 1));
    auto point_psi = [&](Cx z, std::size_t rep, std::size_t j) {
      const double r = std::abs(z);
      if (n == 2) return psi_n2(z).value;
      if (r <= kSmallZoneRadius) return psi_closed_small(z, n).value;
      if (r >= kLargeZoneRadius) return psi_closed_large(z, n).value;
      any_sampled_psi = true;
      const std::uint64_t key = mix64(prim_seed ^ mix64((static_cast<std::uint64_t>(rep) << 40) ^ j));
      return psi_single_shift(DzSpec::make(z, n), inner_base, inner, key);
    };
    const RqmcLayout layout = RqmcLayout::for_budget(std::max<std::uint64_t>(2, outer_total / prims.size()));
    McEstimate est = std::visit(
        [&](const auto& p) -> McEstimate {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Rect>) {
            const double x0 = to_double(p.x_lo), dx = to_double(p.x_hi) - x0;
            const double y0 = to_double(p.y_lo), dy = to_double(p.y_hi) - y0;
            return rqmc_mean(2, layout, prim_seed, [&](const double* u, std::size_t rep, std::size_t j) {
              return dx * dy * point_psi(Cx(x0 + u[0] * dx, y0 + u[1] * dy), rep, j);
            });
          } else if constexpr (std::is_same_v<P, Disk>) {
            const Cx c(to_double(p.cx), to_double(p.cy));
            const double rad = to_double(p.r);
            const double area = std::numbers::pi * rad * rad;
            return rqmc_mean(2, layout, prim_seed, [&](const double* u, std::size_t rep, std::size_t j) {
              Cx z = c + std::polar(rad * std::sqrt(u[0]), 2.0 * std::numbers::pi * u[1]);
              return area * point_psi(z, rep, j);
            });
          } else {
            // Change of variables z = 1/w over the source rectangle, dnu(z) = |w|^-4 dnu(w).
            const double x0 = to_double(p.source.x_lo), dx = to_double(p.source.x_hi) - x0;
            const double y0 = to_double(p.source.y_lo), dy = to_double(p.source.y_hi) - y0;
            return rqmc_mean(2, layout, prim_seed, [&](const double* u, std::size_t rep, std::size_t j) {
              Cx w(x0 + u[0] * dx, y0 + u[1] * dy);
              double n2 = std::norm(w);
              return dx * dy * point_psi(1.0 / w, rep, j) / (n2 * n2);
            });
          }
        },
        prims[i]);
    total.value += est.mean;
    variance += est.std_error * est.std_error;
    total.samples += est.evaluations * (n == 2 ? 1 : inner);
  }
  total.std_error = std::sqrt(variance);
  if (n > 2 && !any_sampled_psi) total.method = DensityMethod::kClosedSmall;
  return total;
}

double zeta(int d) {
  if (d < 2) throw std::domain_error("zeta is evaluated at integers d >= 2");
  constexpr double pi = std::numbers::pi;
  if (d == 2) return pi * pi / 6.0;
  if (d == 3) return 1.2020569031595942854;
  if (d == 4) return pi * pi * pi * pi / 90.0;
  // Partial sum to N with the tail sum_{j>N} j^-d <= 1/((d-1) N^{d-1}) below 1e-17.
  const auto N = static_cast<long>(std::ceil(std::pow(1e17 / (d - 1), 1.0 / (d - 1))));
  double s = 0.0;
  for (long j = N; j >= 1; --j) s += std::pow(static_cast<double>(j), -d);
  return s;
}

Prediction predicted_count(double Q, int n, const DensityEstimate& integral) {
  const double factor = std::pow(Q, n + 1) / (2.0 * zeta(n + 1));
  return {factor * integral.value, factor * integral.std_error, integral};
}

Prediction predicted_count(double Q, int n, const ComplexRegion& omega, std::uint64_t budget, std::uint64_t seed) {
  if (!(Q > 0)) throw std::domain_error("Q must be positive");
  return predicted_count(Q, n, integrate_psi(omega, n, budget, seed));
}

}  // namespace algdist
