#include "algdist/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace algdist {

namespace {

using Cx = std::complex<double>;
using detail::ArcGeometry;
using detail::PrimitiveGeometry;

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    out.push_back(strip(s.substr(pos, next == s.npos ? s.npos : next - pos)));
    if (next == s.npos) break;
    pos = next + 1;
  }
  return out;
}

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

int sign(const Rational& r) { return r.sign(); }

/// Sign of a + b*sqrt(e), e >= 0, decided exactly.
int surd_sign(const Rational& a, const Rational& b, const Rational& e) {
  int sa = sign(a);
  int sb = (e.is_zero() ? 0 : sign(b));
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  int cmp = sign(Rational(a * a - b * b * e));
  if (cmp > 0) return sa;
  if (cmp < 0) return sb;
  return 0;
}

void validate(const Rect& r) {
  if (!(r.x_lo < r.x_hi) || !(r.y_lo < r.y_hi))
    throw std::invalid_argument("rect: need x_lo < x_hi and y_lo < y_hi");
  if (!(r.y_lo > 0 || r.y_hi < 0))
    throw std::invalid_argument("rect: closure must not meet the real axis");
}

void validate(const Disk& d) {
  if (!(d.r > 0)) throw std::invalid_argument("disk: radius must be positive");
  Rational acy = d.cy < 0 ? Rational(-d.cy) : d.cy;
  if (!(acy > d.r)) throw std::invalid_argument("disk: closure must not meet the real axis");
}

Disk invert_disk(const Disk& d) {
  Rational den = d.cx * d.cx + d.cy * d.cy - d.r * d.r;
  return Disk{d.cx / den, -d.cy / den, d.r / den};
}

bool disjoint(const Rect& a, const Rect& b) {
  return a.x_hi <= b.x_lo || b.x_hi <= a.x_lo || a.y_hi <= b.y_lo || b.y_hi <= a.y_lo;
}

bool disjoint(const Disk& a, const Disk& b) {
  Rational dx = a.cx - b.cx, dy = a.cy - b.cy, rs = a.r + b.r;
  return dx * dx + dy * dy >= rs * rs;
}

bool disjoint(const Rect& a, const Disk& d) {
  Rational px = std::clamp(d.cx, a.x_lo, a.x_hi);
  Rational py = std::clamp(d.cy, a.y_lo, a.y_hi);
  Rational dx = d.cx - px, dy = d.cy - py;
  return dx * dx + dy * dy >= d.r * d.r;
}

double point_segment_distance(Cx w, Cx p, Cx q) {
  Cx d = q - p;
  double len2 = std::norm(d);
  double tau = len2 > 0 ? std::clamp(((w - p) * std::conj(d)).real() / len2, 0.0, 1.0) : 0.0;
  return std::abs(w - (p + tau * d));
}

ArcGeometry make_arc(Cx a, Cx b) {
  ArcGeometry arc;
  arc.a = a;
  arc.b = b;
  double cross = a.real() * b.imag() - a.imag() * b.real();
  if (cross == 0.0) {
    arc.straight = true;
    return arc;
  }
  // Circumcircle of 0, 1/a, 1/b.
  Cx p = 1.0 / a, r = 1.0 / b;
  double den = 2.0 * (p.real() * r.imag() - p.imag() * r.real());
  double cx = (r.imag() * std::norm(p) - p.imag() * std::norm(r)) / den;
  double cy = (p.real() * std::norm(r) - r.real() * std::norm(p)) / den;
  arc.center = Cx(cx, cy);
  arc.radius = std::abs(arc.center);
  return arc;
}

double arc_distance(Cx w, const ArcGeometry& arc) {
  Cx e0 = 1.0 / arc.a, e1 = 1.0 / arc.b;
  if (arc.straight) return point_segment_distance(w, e0, e1);
  Cx d = w - arc.center;
  double len = std::abs(d);
  if (len == 0.0) return arc.radius;
  Cx q = arc.center + d * (arc.radius / len);
  bool on_arc = false;
  if (std::abs(q) > 1e-300) {
    Cx s = 1.0 / q;
    Cx seg = arc.b - arc.a;
    double tau = ((s - arc.a) * std::conj(seg)).real() / std::norm(seg);
    on_arc = tau >= 0.0 && tau <= 1.0;
  }
  if (on_arc) return std::abs(len - arc.radius);
  return std::min(std::abs(w - e0), std::abs(w - e1));
}

bool rect_contains(const PrimitiveGeometry& g, Cx z) {
  return z.real() > g.x_lo && z.real() < g.x_hi && z.imag() > g.y_lo && z.imag() < g.y_hi;
}

double rect_distance(const PrimitiveGeometry& g, Cx z) {
  double x = z.real(), y = z.imag();
  if (rect_contains(g, z)) return std::min({x - g.x_lo, g.x_hi - x, y - g.y_lo, g.y_hi - y});
  double dx = std::max({g.x_lo - x, 0.0, x - g.x_hi});
  double dy = std::max({g.y_lo - y, 0.0, y - g.y_hi});
  return std::hypot(dx, dy);
}

PrimitiveGeometry rect_geometry(const Rect& r) {
  PrimitiveGeometry g;
  g.kind = PrimitiveGeometry::Kind::kRect;
  g.x_lo = to_double(r.x_lo);
  g.x_hi = to_double(r.x_hi);
  g.y_lo = to_double(r.y_lo);
  g.y_hi = to_double(r.y_hi);
  g.bbox = {g.x_lo, g.x_hi, g.y_lo, g.y_hi};
  return g;
}

PrimitiveGeometry disk_geometry(const Disk& d) {
  PrimitiveGeometry g;
  g.kind = PrimitiveGeometry::Kind::kDisk;
  g.center = Cx(to_double(d.cx), to_double(d.cy));
  g.radius = to_double(d.r);
  g.bbox = {g.center.real() - g.radius, g.center.real() + g.radius, g.center.imag() - g.radius,
            g.center.imag() + g.radius};
  return g;
}

PrimitiveGeometry inverted_geometry(const InvertedRect& ir) {
  PrimitiveGeometry g = rect_geometry(ir.source);
  g.kind = PrimitiveGeometry::Kind::kInvertedRect;
  std::array<Cx, 4> corners{Cx(g.x_lo, g.y_lo), Cx(g.x_hi, g.y_lo), Cx(g.x_hi, g.y_hi),
                            Cx(g.x_lo, g.y_hi)};
  for (int i = 0; i < 4; ++i) g.arcs[static_cast<std::size_t>(i)] = make_arc(corners[static_cast<std::size_t>(i)], corners[static_cast<std::size_t>((i + 1) % 4)]);

  double max_mod = 0.0, min_arg = 10.0, max_arg = -10.0;
  for (Cx c : corners) {
    max_mod = std::max(max_mod, std::abs(c));
    min_arg = std::min(min_arg, std::arg(c));
    max_arg = std::max(max_arg, std::arg(c));
  }
  double nx = std::clamp(0.0, g.x_lo, g.x_hi), ny = std::clamp(0.0, g.y_lo, g.y_hi);
  g.r_min = 1.0 / max_mod;
  g.r_max = 1.0 / std::hypot(nx, ny);
  g.th_min = -max_arg;
  g.th_max = -min_arg;

  std::vector<Cx> pts;
  for (double r : {g.r_min, g.r_max})
    for (double th : {g.th_min, g.th_max}) pts.push_back(std::polar(r, th));
  for (int k = -4; k <= 4; ++k) {
    double th = k * std::numbers::pi / 2;
    if (th > g.th_min && th < g.th_max) pts.push_back(std::polar(g.r_max, th));
  }
  g.bbox = {1e300, -1e300, 1e300, -1e300};
  for (Cx p : pts) {
    g.bbox.x_lo = std::min(g.bbox.x_lo, p.real());
    g.bbox.x_hi = std::max(g.bbox.x_hi, p.real());
    g.bbox.y_lo = std::min(g.bbox.y_lo, p.imag());
    g.bbox.y_hi = std::max(g.bbox.y_hi, p.imag());
  }
  return g;
}

bool bboxes_separated(const BoundingBox& a, const BoundingBox& b) {
  return a.x_hi < b.x_lo || b.x_hi < a.x_lo || a.y_hi < b.y_lo || b.y_hi < a.y_lo;
}

bool disjoint(const Primitive& a, const Primitive& b) {
  return std::visit(
      [](const auto& p, const auto& q) -> bool {
        using P = std::decay_t<decltype(p)>;
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<P, Rect> && std::is_same_v<Q, Rect>) return disjoint(p, q);
        else if constexpr (std::is_same_v<P, Disk> && std::is_same_v<Q, Disk>) return disjoint(p, q);
        else if constexpr (std::is_same_v<P, Rect> && std::is_same_v<Q, Disk>) return disjoint(p, q);
        else if constexpr (std::is_same_v<P, Disk> && std::is_same_v<Q, Rect>) return disjoint(q, p);
        else if constexpr (std::is_same_v<P, InvertedRect> && std::is_same_v<Q, InvertedRect>)
          return disjoint(p.source, q.source);
        else if constexpr (std::is_same_v<P, InvertedRect> && std::is_same_v<Q, Disk>)
          return disjoint(p.source, invert_disk(q));
        else if constexpr (std::is_same_v<P, Disk> && std::is_same_v<Q, InvertedRect>)
          return disjoint(q.source, invert_disk(p));
        else {
          // Rect against InvertedRect: only a bounding-box separation can be certified.
          const Rect& r = [&]() -> const Rect& {
            if constexpr (std::is_same_v<P, Rect>) return p;
            else return q;
          }();
          const InvertedRect& ir = [&]() -> const InvertedRect& {
            if constexpr (std::is_same_v<P, InvertedRect>) return p;
            else return q;
          }();
          if (bboxes_separated(rect_geometry(r).bbox, inverted_geometry(ir).bbox)) return true;
          throw std::invalid_argument(
              "cannot certify that a rect and an invrect are disjoint; separate them further");
        }
      },
      a, b);
}

Rect conj_rect(const Rect& r) { return Rect{r.x_lo, r.x_hi, -r.y_hi, -r.y_lo}; }
Rect neg_rect(const Rect& r) { return Rect{-r.x_hi, -r.x_lo, -r.y_hi, -r.y_lo}; }

bool rect_contains_exact(const Rect& r, const SurdPoint& z) {
  if (!(z.re > r.x_lo && z.re < r.x_hi)) return false;
  return surd_sign(-r.y_lo, z.im_coef, z.radicand) > 0 &&
         surd_sign(r.y_hi, -z.im_coef, z.radicand) > 0;
}

std::string join_primitives(const std::vector<Primitive>& prims) {
  std::string out;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    if (i) out += ";";
    out += to_dsl(prims[i]);
  }
  return out;
}

// Integral over [x_lo, x_hi] x [y_lo, y_hi] of |z|^{-4}, i.e. the area of the
// inverted rectangle. The x-integral is closed form; y is done numerically.
double inverted_rect_area(const PrimitiveGeometry& g) {
  auto inner = [](double x, double y) {
    double y2 = y * y;
    return x / (2.0 * y2 * (x * x + y2)) + std::atan(x / y) / (2.0 * y2 * y);
  };
  auto f = [&](double y) { return inner(g.x_hi, y) - inner(g.x_lo, y); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, g.y_lo, g.y_hi, 15, 1e-14);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != s.npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return num / den;
  }
  bool neg = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    neg = s[i] == '-';
    ++i;
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false, any_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  int exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    std::string exp_str(s.substr(i + 1));
    std::size_t used = 0;
    try {
      exponent = std::stoi(exp_str, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != exp_str.size() || std::abs(exponent) > 300)
      throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
  }
  // cpp_int reads a leading zero as an octal prefix.
  std::size_t nz = digits.find_first_not_of('0');
  BigInt mantissa(nz == std::string::npos ? std::string("0") : digits.substr(nz));
  int shift = exponent - frac_digits;
  Rational value = shift >= 0 ? Rational(mantissa * pow10(shift)) : Rational(mantissa, pow10(-shift));
  return neg ? Rational(-value) : value;
}

std::string format_rational(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt d = den;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.str() + "/" + den.str();
  int k = std::max(twos, fives);
  BigInt scaled = num * pow10(k) / den;
  bool neg = scaled < 0;
  std::string digits = (neg ? BigInt(-scaled) : scaled).str();
  if (k > 0) {
    if (static_cast<int>(digits.size()) <= k) digits.insert(0, static_cast<std::size_t>(k + 1) - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(k), ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
  }
  return (neg ? "-" : "") + digits;
}

std::string to_dsl(const Primitive& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rect>) {
          return "rect:" + format_rational(v.x_lo) + "," + format_rational(v.x_hi) + "," +
                 format_rational(v.y_lo) + "," + format_rational(v.y_hi);
        } else if constexpr (std::is_same_v<T, Disk>) {
          return "disk:" + format_rational(v.cx) + "," + format_rational(v.cy) + "," +
                 format_rational(v.r);
        } else {
          const Rect& s = v.source;
          return "invrect:" + format_rational(s.x_lo) + "," + format_rational(s.x_hi) + "," +
                 format_rational(s.y_lo) + "," + format_rational(s.y_hi);
        }
      },
      p);
}

ComplexRegion::ComplexRegion(std::vector<Primitive> primitives, std::string text)
    : ComplexRegion(std::move(primitives), std::move(text), true) {}

ComplexRegion::ComplexRegion(std::vector<Primitive> primitives, std::string text, bool validate_disjoint)
    : primitives_(std::move(primitives)), text_(std::move(text)) {
  if (primitives_.empty()) throw std::invalid_argument("region: no primitives");
  for (const auto& p : primitives_) {
    std::visit(
        [](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, InvertedRect>) validate(v.source);
          else validate(v);
        },
        p);
  }
  if (validate_disjoint) {
    for (std::size_t i = 0; i < primitives_.size(); ++i)
      for (std::size_t j = i + 1; j < primitives_.size(); ++j)
        if (!disjoint(primitives_[i], primitives_[j]))
          throw std::invalid_argument("region: primitives " + std::to_string(i) + " and " +
                                      std::to_string(j) + " overlap");
  }
  if (text_.empty()) text_ = join_primitives(primitives_);
  build();
}

void ComplexRegion::build() {
  geometry_.clear();
  areas_.clear();
  bbox_ = {1e300, -1e300, 1e300, -1e300};
  for (const auto& p : primitives_) {
    PrimitiveGeometry g = std::visit(
        [](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rect>) return rect_geometry(v);
          else if constexpr (std::is_same_v<T, Disk>) return disk_geometry(v);
          else return inverted_geometry(v);
        },
        p);
    double a = 0.0;
    switch (g.kind) {
      case PrimitiveGeometry::Kind::kRect: a = (g.x_hi - g.x_lo) * (g.y_hi - g.y_lo); break;
      case PrimitiveGeometry::Kind::kDisk: a = std::numbers::pi * g.radius * g.radius; break;
      case PrimitiveGeometry::Kind::kInvertedRect: a = inverted_rect_area(g); break;
    }
    areas_.push_back(a);
    bbox_.x_lo = std::min(bbox_.x_lo, g.bbox.x_lo);
    bbox_.x_hi = std::max(bbox_.x_hi, g.bbox.x_hi);
    bbox_.y_lo = std::min(bbox_.y_lo, g.bbox.y_lo);
    bbox_.y_hi = std::max(bbox_.y_hi, g.bbox.y_hi);
    geometry_.push_back(g);
  }
  extent_ = std::max({std::abs(bbox_.x_lo), std::abs(bbox_.x_hi), std::abs(bbox_.y_lo), std::abs(bbox_.y_hi)});
}

ComplexRegion ComplexRegion::parse(std::string_view dsl) {
  std::vector<Primitive> prims;
  for (std::string_view part : split(dsl, ';')) {
    if (part.empty()) continue;
    auto colon = part.find(':');
    if (colon == part.npos) throw std::invalid_argument("region: missing ':' in '" + std::string(part) + "'");
    std::string kind(strip(part.substr(0, colon)));
    std::vector<Rational> v;
    for (std::string_view num : split(part.substr(colon + 1), ',')) v.push_back(parse_rational(num));
    auto need = [&](std::size_t k) {
      if (v.size() != k)
        throw std::invalid_argument("region: '" + kind + "' expects " + std::to_string(k) + " numbers");
    };
    if (kind == "rect") {
      need(4);
      prims.emplace_back(Rect{v[0], v[1], v[2], v[3]});
    } else if (kind == "disk") {
      need(3);
      prims.emplace_back(Disk{v[0], v[1], v[2]});
    } else if (kind == "invrect") {
      need(4);
      prims.emplace_back(InvertedRect{Rect{v[0], v[1], v[2], v[3]}});
    } else {
      throw std::invalid_argument("region: unknown primitive '" + kind + "'");
    }
  }
  return ComplexRegion(std::move(prims), std::string(strip(dsl)));
}

bool ComplexRegion::contains(std::complex<double> z) const {
  for (const auto& g : geometry_) {
    switch (g.kind) {
      case PrimitiveGeometry::Kind::kRect:
        if (rect_contains(g, z)) return true;
        break;
      case PrimitiveGeometry::Kind::kDisk:
        if (std::norm(z - g.center) < g.radius * g.radius) return true;
        break;
      case PrimitiveGeometry::Kind::kInvertedRect:
        if (z != Cx(0.0, 0.0) && rect_contains(g, 1.0 / z)) return true;
        break;
    }
  }
  return false;
}

bool ComplexRegion::contains_exact(const SurdPoint& z) const {
  for (const auto& p : primitives_) {
    bool in = std::visit(
        [&](const auto& v) -> bool {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rect>) {
            return rect_contains_exact(v, z);
          } else if constexpr (std::is_same_v<T, Disk>) {
            // (re - cx)^2 + (q sqrt(E) - cy)^2 < r^2
            Rational dx = z.re - v.cx;
            Rational a = dx * dx + z.im_coef * z.im_coef * z.radicand + v.cy * v.cy - v.r * v.r;
            Rational b = -2 * v.cy * z.im_coef;
            return surd_sign(a, b, z.radicand) < 0;
          } else {
            Rational mod2 = z.re * z.re + z.im_coef * z.im_coef * z.radicand;
            if (mod2 == 0) return false;
            return rect_contains_exact(v.source, SurdPoint{z.re / mod2, -z.im_coef / mod2, z.radicand});
          }
        },
        p);
    if (in) return true;
  }
  return false;
}

double ComplexRegion::distance_to_boundary(std::complex<double> z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : geometry_) {
    double d = 0.0;
    switch (g.kind) {
      case PrimitiveGeometry::Kind::kRect: d = rect_distance(g, z); break;
      case PrimitiveGeometry::Kind::kDisk: d = std::abs(std::abs(z - g.center) - g.radius); break;
      case PrimitiveGeometry::Kind::kInvertedRect:
        d = std::numeric_limits<double>::infinity();
        for (const auto& arc : g.arcs) d = std::min(d, arc_distance(z, arc));
        break;
    }
    best = std::min(best, d);
  }
  return best;
}

double ComplexRegion::area() const {
  double a = 0.0;
  for (double v : areas_) a += v;
  return a;
}

double ComplexRegion::primitive_area(std::size_t i) const { return areas_.at(i); }

std::complex<double> ComplexRegion::sample_point(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pick = unit(rng) * area();
  std::size_t idx = 0;
  for (; idx + 1 < areas_.size(); ++idx) {
    if (pick < areas_[idx]) break;
    pick -= areas_[idx];
  }
  const auto& g = geometry_[idx];
  switch (g.kind) {
    case PrimitiveGeometry::Kind::kRect:
      return {g.x_lo + unit(rng) * (g.x_hi - g.x_lo), g.y_lo + unit(rng) * (g.y_hi - g.y_lo)};
    case PrimitiveGeometry::Kind::kDisk: {
      double r = g.radius * std::sqrt(unit(rng));
      double th = 2.0 * std::numbers::pi * unit(rng);
      return g.center + std::polar(r, th);
    }
    case PrimitiveGeometry::Kind::kInvertedRect: {
      const double r2lo = g.r_min * g.r_min, r2hi = g.r_max * g.r_max;
      for (;;) {
        double r = std::sqrt(r2lo + unit(rng) * (r2hi - r2lo));
        double th = g.th_min + unit(rng) * (g.th_max - g.th_min);
        Cx w = std::polar(r, th);
        if (rect_contains(g, 1.0 / w)) return w;
      }
    }
  }
  return {};
}

ComplexRegion ComplexRegion::conjugate() const {
  std::vector<Primitive> out;
  for (const auto& p : primitives_) {
    out.push_back(std::visit(
        [](const auto& v) -> Primitive {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rect>) return conj_rect(v);
          else if constexpr (std::is_same_v<T, Disk>) return Disk{v.cx, -v.cy, v.r};
          else return InvertedRect{conj_rect(v.source)};
        },
        p));
  }
  return ComplexRegion(std::move(out), {}, false);
}

ComplexRegion ComplexRegion::negate() const {
  std::vector<Primitive> out;
  for (const auto& p : primitives_) {
    out.push_back(std::visit(
        [](const auto& v) -> Primitive {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rect>) return neg_rect(v);
          else if constexpr (std::is_same_v<T, Disk>) return Disk{-v.cx, -v.cy, v.r};
          else return InvertedRect{neg_rect(v.source)};
        },
        p));
  }
  return ComplexRegion(std::move(out), {}, false);
}

ComplexRegion ComplexRegion::invert() const {
  std::vector<Primitive> out;
  for (const auto& p : primitives_) {
    out.push_back(std::visit(
        [](const auto& v) -> Primitive {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Rect>) return InvertedRect{v};
          else if constexpr (std::is_same_v<T, Disk>) return invert_disk(v);
          else return v.source;
        },
        p));
  }
  // Inversion is a bijection, so disjointness carries over.
  return ComplexRegion(std::move(out), {}, false);
}

double ComplexRegion::distance_to_real_axis() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : geometry_) {
    double d = 0.0;
    switch (g.kind) {
      case PrimitiveGeometry::Kind::kRect: d = std::min(std::abs(g.y_lo), std::abs(g.y_hi)); break;
      case PrimitiveGeometry::Kind::kDisk: d = std::abs(g.center.imag()) - g.radius; break;
      case PrimitiveGeometry::Kind::kInvertedRect: {
        double ymin = std::min(std::abs(g.y_lo), std::abs(g.y_hi));
        double m = 1.0 / g.r_min;
        d = ymin / (m * m);
        break;
      }
    }
    best = std::min(best, d);
  }
  return best;
}

}  // namespace algdist
