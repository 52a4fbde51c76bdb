#include "algdist/lattice.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "algdist/density.hpp"

namespace algdist {

namespace {

using i128 = __int128;

struct Fraction {
  i128 num;
  i128 den;
};

Fraction to_fraction(const Rational& s) {
  if (s < 0) throw std::domain_error("dilation factor must be nonnegative");
  const BigInt num = boost::multiprecision::numerator(s);
  const BigInt den = boost::multiprecision::denominator(s);
  const BigInt limit = BigInt(1) << 60;
  if (num > limit || den > limit) throw std::domain_error("dilation factor has too many digits");
  return {static_cast<i128>(num.convert_to<long long>()), static_cast<i128>(den.convert_to<long long>())};
}

Coeff floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<Coeff>(q);
}

Coeff ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

Coeff isqrt(i128 v) {
  if (v <= 0) return 0;
  auto r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return static_cast<Coeff>(r);
}

/// Calls f(v) for every v in [a, b]^k.
template <class F>
void for_each_vector(int k, Coeff a, Coeff b, F&& f) {
  if (k == 0) {
    std::vector<Coeff> empty;
    f(std::span<const Coeff>(empty));
    return;
  }
  if (a > b) return;
  std::vector<Coeff> v(static_cast<std::size_t>(k), a);
  while (true) {
    f(std::span<const Coeff>(v));
    int i = 0;
    while (i < k && v[static_cast<std::size_t>(i)] == b) v[static_cast<std::size_t>(i++)] = a;
    if (i == k) return;
    ++v[static_cast<std::size_t>(i)];
  }
}

Coeff gcd_all(std::span<const Coeff> v) {
  Coeff g = 0;
  for (Coeff c : v) g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

}  // namespace

LatticeRegion::LatticeRegion(LatticeShape shape, int d, Coeff lo, Coeff hi)
    : shape_(shape), d_(d), lo_(lo), hi_(hi) {
  if (d < 1 || d > 8) throw std::domain_error("lattice dimension must lie in [1, 8]");
  switch (shape) {
    case LatticeShape::kBox:
      if (lo >= hi) throw std::domain_error("box needs lo < hi");
      half_width_ = std::max(lo < 0 ? -lo : lo, hi < 0 ? -hi : hi);
      volume_ = std::pow(static_cast<double>(hi - lo), d);
      break;
    case LatticeShape::kBall:
      half_width_ = 1;
      volume_ = std::pow(std::numbers::pi, d / 2.0) / boost::math::tgamma(d / 2.0 + 1.0);
      break;
    case LatticeShape::kSimplex:
      half_width_ = 1;
      volume_ = 1.0 / boost::math::tgamma(d + 1.0);
      break;
  }
}

LatticeRegion LatticeRegion::box(int d, Coeff lo, Coeff hi) { return {LatticeShape::kBox, d, lo, hi}; }
LatticeRegion LatticeRegion::ball(int d) { return {LatticeShape::kBall, d, 0, 0}; }
LatticeRegion LatticeRegion::simplex(int d) { return {LatticeShape::kSimplex, d, 0, 0}; }

bool LatticeRegion::contains_origin() const {
  return shape_ != LatticeShape::kBox || (lo_ <= 0 && hi_ >= 0);
}

std::string LatticeRegion::name() const {
  switch (shape_) {
    case LatticeShape::kBox:
      return "box[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]^" + std::to_string(d_);
    case LatticeShape::kBall: return "ball^" + std::to_string(d_);
    case LatticeShape::kSimplex: return "simplex^" + std::to_string(d_);
  }
  return "?";
}

bool LatticeRegion::contains_scaled(std::span<const Coeff> v, const Rational& s) const {
  if (static_cast<int>(v.size()) != d_) throw std::invalid_argument("vector dimension mismatch");
  const Fraction f = to_fraction(s);
  switch (shape_) {
    case LatticeShape::kBox:
      for (Coeff c : v)
        if (f.den * c < f.num * lo_ || f.den * c > f.num * hi_) return false;
      return true;
    case LatticeShape::kBall: {
      i128 r2 = 0;
      for (Coeff c : v) r2 += static_cast<i128>(c) * c;
      return f.den * f.den * r2 <= f.num * f.num;
    }
    case LatticeShape::kSimplex: {
      i128 sum = 0;
      for (Coeff c : v) {
        if (c < 0) return false;
        sum += c;
      }
      return f.den * sum <= f.num;
    }
  }
  return false;
}

std::pair<Coeff, Coeff> LatticeRegion::coordinate_range(const Rational& s) const {
  const Fraction f = to_fraction(s);
  switch (shape_) {
    case LatticeShape::kBox: return {ceil_div(f.num * lo_, f.den), floor_div(f.num * hi_, f.den)};
    case LatticeShape::kBall: {
      Coeff r = floor_div(f.num, f.den);
      return {-r, r};
    }
    case LatticeShape::kSimplex: return {0, floor_div(f.num, f.den)};
  }
  return {0, -1};
}

int mobius(std::uint64_t j) {
  if (j == 0) throw std::domain_error("mobius is defined for j >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= j; ++p) {
    if (j % p) continue;
    j /= p;
    if (j % p == 0) return 0;
    sign = -sign;
  }
  if (j > 1) sign = -sign;
  return sign;
}

std::uint64_t lambda_count(const LatticeRegion& A, const Rational& t) {
  const auto [a, b] = A.coordinate_range(t);
  if (a > b) return 0;
  const int d = A.dimension();
  const Fraction f = to_fraction(t);
  std::uint64_t count = 0;
  switch (A.shape()) {
    case LatticeShape::kBox: {
      count = 1;
      for (int i = 0; i < d; ++i) count *= static_cast<std::uint64_t>(b - a + 1);
      return count;
    }
    case LatticeShape::kBall:
      // Scan all but the last coordinate; the last one ranges over |c| <= sqrt(s^2 - |rest|^2).
      for_each_vector(d - 1, a, b, [&](std::span<const Coeff> v) {
        i128 r2 = 0;
        for (Coeff c : v) r2 += static_cast<i128>(c) * c;
        i128 room = f.num * f.num - f.den * f.den * r2;
        if (room < 0) return;
        Coeff k = isqrt(room / (f.den * f.den));
        count += static_cast<std::uint64_t>(2 * k + 1);
      });
      return count;
    case LatticeShape::kSimplex:
      for_each_vector(d - 1, a, b, [&](std::span<const Coeff> v) {
        i128 sum = 0;
        for (Coeff c : v) sum += c;
        if (sum <= b) count += static_cast<std::uint64_t>(b - sum + 1);
      });
      return count;
  }
  return count;
}

std::uint64_t lambda_star_brute(const LatticeRegion& A, const Rational& t) {
  const auto [a, b] = A.coordinate_range(t);
  std::uint64_t count = 0;
  for_each_vector(A.dimension(), a, b, [&](std::span<const Coeff> v) {
    if (gcd_all(v) == 1 && A.contains_scaled(v, t)) ++count;
  });
  return count;
}

std::uint64_t lambda_star_mobius(const LatticeRegion& A, const Rational& t) {
  const Fraction f = to_fraction(t);
  const Coeff J = floor_div(f.num * A.half_width(), f.den) + 1;
  const std::int64_t origin = A.contains_origin() ? 1 : 0;
  std::int64_t acc = 0;
  for (Coeff j = 1; j <= J; ++j) {
    const int mu = mobius(static_cast<std::uint64_t>(j));
    if (mu == 0) continue;
    const Rational s = t / j;
    acc += mu * (static_cast<std::int64_t>(lambda_count(A, s)) - origin);
  }
  if (acc < 0) throw std::logic_error("negative primitive point count");
  return static_cast<std::uint64_t>(acc);
}

std::vector<AsymptoticRow> asymptotic_report(const LatticeRegion& A, std::span<const Rational> ts) {
  if (!A.exact_volume()) throw std::domain_error("asymptotic report needs a known volume");
  const int d = A.dimension();
  if (d < 2) throw std::domain_error("asymptotic report needs d >= 2");
  const double vol = *A.exact_volume();
  const double z = zeta(d);
  std::vector<AsymptoticRow> rows;
  for (const auto& tr : ts) {
    AsymptoticRow row;
    row.t = tr.convert_to<double>();
    row.lambda_star = lambda_star_mobius(A, tr);
    row.predicted = vol * std::pow(row.t, d) / z;
    row.residual = static_cast<double>(row.lambda_star) - row.predicted;
    row.scaled = row.residual / std::pow(row.t, d - 1);
    row.scaled_log = d == 2 && row.t > 1.0 ? row.scaled / std::log(row.t) : 0.0;
    row.ratio = static_cast<double>(row.lambda_star) / row.predicted;
    rows.push_back(row);
  }
  return rows;
}

TailCheck mobius_tail_check(int d, std::uint64_t M) {
  if (d < 2 || M < 1) throw std::domain_error("tail check needs d >= 2 and M >= 1");
  TailCheck c;
  c.d = d;
  c.M = M;
  long double s = 0.0L;
  for (std::uint64_t j = 1; j <= M; ++j) {
    int mu = mobius(j);
    if (mu != 0) s += mu / std::pow(static_cast<long double>(j), d);
  }
  c.partial = static_cast<double>(s);
  c.gap = static_cast<double>(std::abs(s - 1.0L / static_cast<long double>(zeta(d))));
  c.bound = 1.0 / ((d - 1) * std::pow(static_cast<double>(M), d - 1));
  c.holds = c.gap <= c.bound;
  return c;
}

}  // namespace algdist
