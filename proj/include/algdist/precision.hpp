#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace algdist::precision {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2; about 106 bits of mantissa.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }
};

namespace dd_detail {

inline DoubleDouble quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = dd_detail::two_sum(a.hi, b.hi);
  DoubleDouble t = dd_detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd_detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = dd_detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  double q3 = r.hi / b.hi;
  return dd_detail::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0 ? -a : a; }

/// Software float with a 128-bit mantissa; the top rung of the ladder.
using Quad = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class T>
struct Traits;

template <>
struct Traits<double> {
  static constexpr double epsilon = std::numeric_limits<double>::epsilon();
  static double to_double(double v) { return v; }
};

template <>
struct Traits<DoubleDouble> {
  static constexpr double epsilon = 0x1p-104;
  static double to_double(DoubleDouble v) { return static_cast<double>(v); }
};

template <>
struct Traits<Quad> {
  static constexpr double epsilon = 0x1p-127;
  static double to_double(const Quad& v) { return v.convert_to<double>(); }
};

/// Minimal complex type over any of the ladder scalars; std::complex is only
/// specified for the built-in floating types.
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_std() const {
    return {Traits<T>::to_double(re), Traits<T>::to_double(im)};
  }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    T den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
};

/// |z| rounded to double; enough for radius bookkeeping.
template <class T>
double magnitude(const Complex<T>& z) {
  return std::abs(z.to_std());
}

}  // namespace algdist::precision
