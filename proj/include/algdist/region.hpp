#pragma once

#include <array>
#include <complex>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace algdist {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "0.35", "-2", "1e-6", "3/7" into an exact rational.
Rational parse_rational(std::string_view text);
/// Terminating decimals print as decimals, everything else as "p/q".
std::string format_rational(const Rational& r);

/// Open axis-parallel rectangle (x_lo, x_hi) x (y_lo, y_hi).
struct Rect {
  Rational x_lo, x_hi, y_lo, y_hi;
};

/// Open disk |z - (cx + i cy)| < r.
struct Disk {
  Rational cx, cy, r;
};

/// The image {1/z : z in source} of an open rectangle. Membership is decided
/// by mapping the query point back, so no arc approximation is involved.
struct InvertedRect {
  Rect source;
};

using Primitive = std::variant<Rect, Disk, InvertedRect>;

/// re + i * im_coef * sqrt(radicand), radicand >= 0. Every root of an integer
/// quadratic has this form, which makes membership decidable exactly.
struct SurdPoint {
  Rational re;
  Rational im_coef;
  Rational radicand;
};

struct BoundingBox {
  double x_lo, x_hi, y_lo, y_hi;
  bool contains(std::complex<double> z, double pad) const {
    return z.real() > x_lo - pad && z.real() < x_hi + pad && z.imag() > y_lo - pad &&
           z.imag() < y_hi + pad;
  }
};

namespace detail {

/// Image under z -> 1/z of one rectangle edge [a, b]: either a circular arc
/// through the origin or, when the edge's line passes through 0, a segment.
struct ArcGeometry {
  std::complex<double> a, b;  // source edge endpoints
  bool straight = false;
  std::complex<double> center;
  double radius = 0.0;
};

/// Floating-point view of a primitive, cached for the hot classification path.
struct PrimitiveGeometry {
  enum class Kind { kRect, kDisk, kInvertedRect } kind = Kind::kRect;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;  // rectangle or source rectangle
  std::complex<double> center;
  double radius = 0;
  std::array<ArcGeometry, 4> arcs{};
  double r_min = 0, r_max = 0, th_min = 0, th_max = 0;  // annular sector holding an InvertedRect
  BoundingBox bbox{};
};

}  // namespace detail

/// Union of pairwise disjoint open primitives whose closures avoid the real
/// axis.
///
/// DSL: `rect:x_lo,x_hi,y_lo,y_hi`, `disk:cx,cy,r`, `invrect:x_lo,x_hi,y_lo,y_hi`,
/// joined by `;`. Numbers are parsed exactly, so the conjugation, negation
/// and inversion maps are exact as well.
class ComplexRegion {
 public:
  explicit ComplexRegion(std::vector<Primitive> primitives, std::string text = {});

  static ComplexRegion parse(std::string_view dsl);

  bool contains(std::complex<double> z) const;
  /// Exact open-set membership; points on the boundary are outside.
  bool contains_exact(const SurdPoint& z) const;
  double distance_to_boundary(std::complex<double> z) const;

  double area() const;
  double primitive_area(std::size_t i) const;
  std::complex<double> sample_point(std::mt19937_64& rng) const;

  ComplexRegion conjugate() const;
  ComplexRegion negate() const;
  ComplexRegion invert() const;

  BoundingBox bounding_box() const { return bbox_; }
  /// Smallest |Im z| over the closure; strictly positive.
  double distance_to_real_axis() const;
  /// Largest coordinate magnitude over the closure.
  double extent() const { return extent_; }

  std::span<const Primitive> primitives() const { return primitives_; }
  const std::string& to_string() const { return text_; }

 private:
  ComplexRegion(std::vector<Primitive> primitives, std::string text, bool validate_disjoint);
  void build();

  std::vector<Primitive> primitives_;
  std::vector<detail::PrimitiveGeometry> geometry_;
  std::vector<double> areas_;
  BoundingBox bbox_{};
  double extent_ = 0.0;
  std::string text_;
};

std::string to_dsl(const Primitive& p);

}  // namespace algdist
