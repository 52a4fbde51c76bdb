#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numeric>

#include "algdist/lattice.hpp"

using namespace algdist;

namespace {

int mobius_oracle(std::uint64_t j) {
  int sign = 1;
  for (std::uint64_t p = 2; p <= j; ++p) {
    if (j % p) continue;
    j /= p;
    if (j % p == 0) return 0;
    sign = -sign;
  }
  return sign;
}

/// Direct enumeration over the integer cube [-R, R]^d with a floating-point
/// membership test; used only where points are far from the boundary or
/// coordinates are exact.
template <class In>
std::pair<std::uint64_t, std::uint64_t> count_points(int d, Coeff R, In in) {
  std::vector<Coeff> v(static_cast<std::size_t>(d), -R);
  std::uint64_t all = 0, primitive = 0;
  while (true) {
    if (in(v)) {
      ++all;
      Coeff g = 0;
      for (Coeff c : v) g = std::gcd(g, c);
      primitive += g == 1;
    }
    int k = 0;
    while (k < d && v[static_cast<std::size_t>(k)] == R) v[static_cast<std::size_t>(k++)] = -R;
    if (k == d) break;
    ++v[static_cast<std::size_t>(k)];
  }
  return {all, primitive};
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("moebius against an independent factorisation") {
    for (std::uint64_t j = 1; j <= 5000; ++j) CHECK(mobius(j) == mobius_oracle(j));
    CHECK(mobius(30) == -1);
    CHECK(mobius(12) == 0);
  }

  TEST_CASE("box counts match enumeration") {
    for (int d : {1, 2, 3}) {
      for (int t : {1, 2, 3, 5, 8}) {
        auto A = LatticeRegion::box(d, -1, 2);
        auto [all, prim] = count_points(d, 3 * t, [&](const std::vector<Coeff>& v) {
          for (Coeff c : v)
            if (c < -t || c > 2 * t) return false;
          return true;
        });
        CHECK(lambda_count(A, Rational(t)) == all);
        CHECK(lambda_star_brute(A, Rational(t)) == prim);
        CHECK(lambda_star_mobius(A, Rational(t)) == prim);
      }
    }
  }

  TEST_CASE("ball and simplex counts match enumeration") {
    for (int d : {2, 3}) {
      for (int t : {1, 2, 4, 7}) {
        auto [ball_all, ball_prim] = count_points(d, t, [&](const std::vector<Coeff>& v) {
          Coeff s = 0;
          for (Coeff c : v) s += c * c;
          return s <= static_cast<Coeff>(t) * t;
        });
        auto B = LatticeRegion::ball(d);
        CHECK(lambda_count(B, Rational(t)) == ball_all);
        CHECK(lambda_star_mobius(B, Rational(t)) == ball_prim);
        auto [sx_all, sx_prim] = count_points(d, t, [&](const std::vector<Coeff>& v) {
          Coeff s = 0;
          for (Coeff c : v) {
            if (c < 0) return false;
            s += c;
          }
          return s <= t;
        });
        auto S = LatticeRegion::simplex(d);
        CHECK(lambda_count(S, Rational(t)) == sx_all);
        CHECK(lambda_star_mobius(S, Rational(t)) == sx_prim);
      }
    }
  }

  TEST_CASE("Moebius route equals brute force including fractional dilations") {
    std::vector<LatticeRegion> shapes{LatticeRegion::box(2, 0, 1), LatticeRegion::box(3, -1, 1), LatticeRegion::ball(2),
                                      LatticeRegion::ball(3),      LatticeRegion::simplex(2),   LatticeRegion::simplex(4)};
    for (const auto& A : shapes)
      for (Rational t : {Rational(7, 2), Rational(13, 3), Rational(9), Rational(21, 4)})
        CHECK(lambda_star_mobius(A, t) == lambda_star_brute(A, t));
  }

  TEST_CASE("asymptotic ratios approach one") {
    auto A = LatticeRegion::box(2, 0, 1);
    std::vector<Rational> ts{Rational(20), Rational(80), Rational(320)};
    auto rows = asymptotic_report(A, ts);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.predicted == doctest::Approx(r.t * r.t / boost::math::zeta(2.0)));
      CHECK(r.ratio == doctest::Approx(static_cast<double>(r.lambda_star) / r.predicted));
    }
    CHECK(std::abs(rows[2].ratio - 1) < std::abs(rows[0].ratio - 1));
    CHECK(std::abs(rows[2].ratio - 1) < 0.01);
    CHECK_THROWS(LatticeRegion::box(2, 1, 1));
  }

  TEST_CASE("Moebius tail bound") {
    for (int d : {2, 3, 4})
      for (std::uint64_t M : {10u, 100u, 1000u}) {
        auto tc = mobius_tail_check(d, M);
        CHECK(tc.holds);
        CHECK(tc.gap <= tc.bound);
        CHECK(tc.gap == doctest::Approx(std::abs(tc.partial - 1.0 / boost::math::zeta(static_cast<double>(d)))));
      }
  }
}
