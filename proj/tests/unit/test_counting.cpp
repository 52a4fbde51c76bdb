#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numeric>
#include <random>
#include <set>

#include "algdist/counting.hpp"

using namespace algdist;
using Cx = std::complex<double>;

namespace {

Coeff gcd3(Coeff a, Coeff b, Coeff c) { return std::gcd(std::gcd(a, b), c); }

bool has_rational_root_oracle(const std::vector<Coeff>& a) {
  // Brute force over p/q with p | a_0 and q | a_m.
  if (a.front() == 0) return true;
  const Coeff a0 = a.front() < 0 ? -a.front() : a.front(), am = a.back();
  for (Coeff p = 1; p <= a0; ++p) {
    if (a0 % p) continue;
    for (Coeff q = 1; q <= am; ++q) {
      if (am % q) continue;
      for (Coeff s : {p, -p}) {
        // sum a_i s^i q^{m-i} == 0
        __int128 v = 0, sp = 1;
        __int128 qp = 1;
        const int m = static_cast<int>(a.size()) - 1;
        std::vector<__int128> qpow(static_cast<std::size_t>(m) + 1);
        for (int i = 0; i <= m; ++i) {
          qpow[static_cast<std::size_t>(i)] = qp;
          qp *= q;
        }
        for (int i = 0; i <= m; ++i) {
          v += a[static_cast<std::size_t>(i)] * sp * qpow[static_cast<std::size_t>(m - i)];
          sp *= s;
        }
        if (v == 0) return true;
      }
    }
  }
  return false;
}

std::vector<Cx> eigen_roots(const std::vector<Coeff>& a) {
  const int m = static_cast<int>(a.size()) - 1;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) C(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) C(i, m - 1) = -static_cast<double>(a[static_cast<std::size_t>(i)]) / static_cast<double>(a.back());
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
  std::vector<Cx> out;
  for (int i = 0; i < m; ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

/// Independent count: closed-form quadratic roots, Eigen cubic roots, brute-force rational root test.
std::uint64_t oracle_psi(int n, Coeff Q, const ComplexRegion& omega) {
  std::uint64_t psi = 0;
  for (Coeff a2 = 1; a2 <= Q; ++a2)
    for (Coeff a1 = -Q; a1 <= Q; ++a1)
      for (Coeff a0 = -Q; a0 <= Q; ++a0) {
        const Coeff disc = a1 * a1 - 4 * a2 * a0;
        if (disc >= 0 || gcd3(a2, a1, a0) != 1) continue;
        const double re = -static_cast<double>(a1) / (2.0 * a2), im = std::sqrt(-static_cast<double>(disc)) / (2.0 * a2);
        psi += omega.contains(Cx(re, im)) + omega.contains(Cx(re, -im));
      }
  if (n < 3) return psi;
  for (Coeff a3 = 1; a3 <= Q; ++a3)
    for (Coeff a2 = -Q; a2 <= Q; ++a2)
      for (Coeff a1 = -Q; a1 <= Q; ++a1)
        for (Coeff a0 = -Q; a0 <= Q; ++a0) {
          std::vector<Coeff> a{a0, a1, a2, a3};
          if (std::gcd(gcd3(a0, a1, a2), a3) != 1 || has_rational_root_oracle(a)) continue;
          for (const Cx& z : eigen_roots(a))
            if (std::abs(z.imag()) > 1e-9) psi += omega.contains(z);
        }
  return psi;
}

/// Reducible members of the enumeration class, found as products of two
/// integer factors of positive degree.
std::uint64_t oracle_reducible(int n, Coeff Q) {
  std::set<std::vector<Coeff>> found;
  auto in_class = [&](const std::vector<Coeff>& c) {
    if (c.back() < 1 || c.back() > Q) return false;
    for (Coeff v : c)
      if (v < -Q || v > Q) return false;
    return true;
  };
  const Coeff B = 4 * Q;  // generous factor coefficient bound for these degrees
  // linear x linear
  for (Coeff b1 = 1; b1 <= Q; ++b1)
    for (Coeff b0 = -B; b0 <= B; ++b0)
      for (Coeff c1 = 1; c1 <= Q; ++c1)
        for (Coeff c0 = -B; c0 <= B; ++c0) {
          std::vector<Coeff> p{b0 * c0, b1 * c0 + b0 * c1, b1 * c1};
          if (in_class(p)) found.insert(p);
        }
  if (n >= 3) {
    // linear x quadratic
    for (Coeff b1 = 1; b1 <= Q; ++b1)
      for (Coeff b0 = -B; b0 <= B; ++b0)
        for (Coeff c2 = 1; c2 <= Q; ++c2)
          for (Coeff c1 = -B; c1 <= B; ++c1)
            for (Coeff c0 = -B; c0 <= B; ++c0) {
              std::vector<Coeff> p{b0 * c0, b0 * c1 + b1 * c0, b0 * c2 + b1 * c1, b1 * c2};
              if (in_class(p)) found.insert(p);
            }
  }
  return found.size();
}

}  // namespace

TEST_SUITE("counting") {
  TEST_CASE("hand enumeration at Q = 1") {
    // Height-1 quadratics with non-real roots: x^2+1, x^2+x+1, x^2-x+1,
    // giving i, -i, (-1 +- i sqrt3)/2, (1 +- i sqrt3)/2.
    const std::vector<Cx> hand{{0, 1}, {0, -1}, {-0.5, std::sqrt(3.0) / 2}, {-0.5, -std::sqrt(3.0) / 2},
                               {0.5, std::sqrt(3.0) / 2}, {0.5, -std::sqrt(3.0) / 2}};
    for (const char* dsl : {"disk:0,1,0.3", "rect:-0.9,0.9,0.5,1.5"}) {
      auto omega = ComplexRegion::parse(dsl);
      std::uint64_t expected = 0;
      for (const auto& z : hand) expected += omega.contains(z);
      auto r = enumerate_count(2, 1, omega);
      CHECK(r.psi == expected);
      CHECK(r.ambiguous == 0);
    }
    CHECK(enumerate_count(2, 1, ComplexRegion::parse("disk:0,1,0.3")).psi == 1);
    CHECK(enumerate_count(2, 1, ComplexRegion::parse("rect:-0.9,0.9,0.5,1.5")).psi == 3);
  }

  TEST_CASE("quadratic counts match the closed-form oracle") {
    for (const char* dsl : {"disk:0,1,0.3", "rect:0.1,0.4,0.35,0.75", "rect:-1.3,0.7,-1.9,-0.2;disk:1.5,1.5,0.7"}) {
      auto omega = ComplexRegion::parse(dsl);
      for (Coeff Q : {2, 5, 9, 13}) {
        auto r = enumerate_count(2, Q, omega);
        CHECK(r.psi == oracle_psi(2, Q, omega));
        CHECK(r.ambiguous == 0);
      }
    }
  }

  TEST_CASE("cubic counts match the eigenvalue oracle") {
    for (const char* dsl : {"disk:0,1,0.4", "rect:0.2,0.6,0.3,0.8", "rect:-2.1,-0.3,0.25,1.7"}) {
      auto omega = ComplexRegion::parse(dsl);
      for (Coeff Q : {1, 2, 4}) {
        auto r = enumerate_count(3, Q, omega);
        CHECK(r.psi == oracle_psi(3, Q, omega));
        CHECK(r.ambiguous == 0);
      }
    }
  }

  TEST_CASE("psi is the weighted sum of gamma and of the degree breakdown") {
    auto r = enumerate_count(4, 3, ComplexRegion::parse("rect:-1.7,1.3,0.2,1.9"));
    std::uint64_t s = 0, d = 0;
    for (std::size_t k = 0; k < r.gamma.size(); ++k) s += (k + 1) * r.gamma[k];
    for (auto v : r.degree_breakdown) d += v;
    CHECK(r.psi == s);
    CHECK(r.psi == d);
    // Upper half-plane region: at most floor(n/2) roots per prime polynomial.
    for (std::size_t k = 2; k < r.gamma.size(); ++k) CHECK(r.gamma[k] == 0);
  }

  TEST_CASE("reducible tally matches products of factors") {
    CHECK(reducible_count(2, 1) == 4);
    for (Coeff Q : {1, 2, 3, 5}) CHECK(reducible_count(2, Q) == oracle_reducible(2, Q));
    for (Coeff Q : {1, 2}) CHECK(reducible_count(3, Q) == oracle_reducible(3, Q));
    auto r = enumerate_count(2, 5, ComplexRegion::parse("disk:0,1,0.3"));
    CHECK(r.reducible_computed);
    CHECK(r.reducible == reducible_count(2, 5));
  }

  TEST_CASE("irreducibility over the rationals") {
    CHECK(is_irreducible_over_rationals(IntPolynomial{1, 0, 1}));
    CHECK_FALSE(is_irreducible_over_rationals(IntPolynomial{-1, 0, 1}));
    CHECK(is_irreducible_over_rationals(IntPolynomial{1, 0, 0, 0, 1}));
    CHECK(is_irreducible_over_rationals(IntPolynomial{1, 0, -10, 0, 1}));  // reducible mod every prime
    CHECK_FALSE(is_irreducible_over_rationals(IntPolynomial{4, 0, 0, 0, 1}));   // (x^2+2x+2)(x^2-2x+2)
    CHECK_FALSE(is_irreducible_over_rationals(IntPolynomial{2, 0, 3, 0, 1}));   // (x^2+1)(x^2+2)
    CHECK(is_irreducible_over_rationals(IntPolynomial{1, 0, 0, 0, 0, 0, 0, 0, 1}));  // x^8 + 1
    CHECK_FALSE(is_irreducible_over_rationals(IntPolynomial{1, 1, 0, 1} * IntPolynomial{1, -1, 0, 1}));
    // Random products are always reducible.
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<Coeff> c(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
      const int d1 = 1 + trial % 4, d2 = 1 + (trial / 4) % 4;
      std::vector<Coeff> f(static_cast<std::size_t>(d1) + 1), g(static_cast<std::size_t>(d2) + 1);
      for (auto& v : f) v = c(rng);
      for (auto& v : g) v = c(rng);
      if (f.back() == 0) f.back() = 1;
      if (g.back() == 0) g.back() = -1;
      CHECK_FALSE(is_irreducible_over_rationals(IntPolynomial(f) * IntPolynomial(g)));
    }
  }

  TEST_CASE("prime polynomials") {
    CHECK(is_prime_polynomial(IntPolynomial{1, 1, 1}));
    CHECK_FALSE(is_prime_polynomial(IntPolynomial{2, 0, 2}));     // imprimitive
    CHECK_FALSE(is_prime_polynomial(IntPolynomial{-1, 0, -1}));   // negative leading coefficient
    CHECK_FALSE(is_prime_polynomial(IntPolynomial{-1, 0, 1}));    // reducible
    CHECK(PrimePolynomial::make(IntPolynomial{1, 0, 1}).has_value());
    CHECK_FALSE(PrimePolynomial::make(IntPolynomial{2, 0, 2}).has_value());
    CHECK_THROWS(PrimePolynomial(IntPolynomial{-1, 0, 1}));
  }

  TEST_CASE("exact symmetries") {
    for (const char* dsl : {"disk:0,1,0.3", "rect:0.2,0.6,0.3,0.8"}) {
      auto omega = ComplexRegion::parse(dsl);
      for (auto [n, Q] : {std::pair{2, Coeff{12}}, std::pair{3, Coeff{4}}, std::pair{4, Coeff{2}}}) {
        CountOptions opt;
        opt.compute_reducible = false;
        auto base = enumerate_count(n, Q, omega, opt);
        CHECK(base.ambiguous == 0);
        CHECK(enumerate_count(n, Q, omega.conjugate(), opt).psi == base.psi);
        CHECK(enumerate_count(n, Q, omega.negate(), opt).psi == base.psi);
        CHECK(enumerate_count(n, Q, omega.invert(), opt).psi == base.psi);
      }
    }
  }

  TEST_CASE("additivity and monotonicity") {
    auto a = ComplexRegion::parse("disk:0,1,0.3");
    auto b = ComplexRegion::parse("rect:0.4,0.9,0.5,1.2");
    auto ab = ComplexRegion::parse("disk:0,1,0.3;rect:0.4,0.9,0.5,1.2");
    CHECK(enumerate_count(3, 3, ab).psi == enumerate_count(3, 3, a).psi + enumerate_count(3, 3, b).psi);
    std::uint64_t prev = 0;
    for (Coeff Q = 1; Q <= 12; ++Q) {
      auto psi = enumerate_count(2, Q, ab).psi;
      CHECK(psi >= prev);
      prev = psi;
    }
  }

  TEST_CASE("shards merge to the monolithic count, independent of threads") {
    auto omega = ComplexRegion::parse("disk:0,1,0.4");
    auto whole = enumerate_count(3, 5, omega);
    for (std::uint32_t T : {1u, 2u, 3u, 7u}) {
      std::vector<CountResult> parts;
      for (std::uint32_t i = 0; i < T; ++i) parts.push_back(partitioned_enumerate(3, 5, omega, Shard{i, T}));
      auto merged = merge(parts);
      CHECK(merged.psi == whole.psi);
      CHECK(merged.gamma == whole.gamma);
      CHECK(merged.reducible == whole.reducible);
      CHECK(merged.degree_breakdown == whole.degree_breakdown);
    }
    CountOptions threaded;
    threaded.threads = 3;
    auto t3 = enumerate_count(3, 5, omega, threaded);
    CHECK(t3.psi == whole.psi);
    CHECK(t3.gamma == whole.gamma);
    CHECK(t3.reducible == whole.reducible);

    std::vector<CountResult> dup{partitioned_enumerate(2, 3, omega, Shard{0, 2}), partitioned_enumerate(2, 3, omega, Shard{0, 2})};
    CHECK_THROWS_AS(merge(dup), std::invalid_argument);
    std::vector<CountResult> mismatch{partitioned_enumerate(2, 3, omega, Shard{0, 2}), partitioned_enumerate(2, 4, omega, Shard{1, 2})};
    CHECK_THROWS_AS(merge(mismatch), std::invalid_argument);
    CHECK_THROWS(partitioned_enumerate(2, 3, omega, Shard{2, 2}));
  }

  TEST_CASE("parameter validation") {
    auto omega = ComplexRegion::parse("disk:0,1,0.3");
    CHECK_THROWS(enumerate_count(1, 3, omega));
    CHECK_THROWS(enumerate_count(9, 3, omega));
    CHECK_THROWS(enumerate_count(2, 0, omega));
  }
}
