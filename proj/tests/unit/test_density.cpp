#include <doctest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <numbers>

#include "algdist/density.hpp"

using namespace algdist;
using Cx = std::complex<double>;

namespace {

/// Midpoint rule for psi(z) straight from the definition: the box
/// [-1,1]^{n-1} cut by |sum t_k Im z^{k+1}/y| <= 1 and
/// |sum t_k (Re z^{k+1} - x Im z^{k+1}/y)| <= 1, integrand
/// |sum t_k ((k+1) z^k - Im z^{k+1}/y)|^2, divided by |y|.
double psi_grid(Cx z, int n, int N) {
  const double x = z.real(), y = z.imag();
  std::vector<double> u, v;
  std::vector<Cx> w;
  for (int k = 1; k < n; ++k) {
    Cx zk = std::pow(z, k), zk1 = std::pow(z, k + 1);
    u.push_back(zk1.imag() / y);
    v.push_back(zk1.real() - x * zk1.imag() / y);
    w.push_back(static_cast<double>(k + 1) * zk - zk1.imag() / y);
  }
  const int dim = n - 1;
  const double h = 2.0 / N;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  double sum = 0.0;
  while (true) {
    double a = 0, b = 0;
    Cx s = 0;
    for (int d = 0; d < dim; ++d) {
      const double t = -1.0 + h * (idx[static_cast<std::size_t>(d)] + 0.5);
      a += t * u[static_cast<std::size_t>(d)];
      b += t * v[static_cast<std::size_t>(d)];
      s += t * w[static_cast<std::size_t>(d)];
    }
    if (std::abs(a) <= 1 && std::abs(b) <= 1) sum += std::norm(s);
    int d = 0;
    while (d < dim && ++idx[static_cast<std::size_t>(d)] == N) idx[static_cast<std::size_t>(d++)] = 0;
    if (d == dim) break;
  }
  return sum * std::pow(h, dim) / std::abs(y);
}

void check_close(const DensityEstimate& e, double truth, double rel_slack) {
  INFO("estimate " << e.value << " +- " << e.std_error << " vs " << truth);
  CHECK(std::abs(e.value - truth) <= 4.0 * e.std_error + rel_slack * std::abs(truth));
}

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("n = 2 closed form at reference points") {
    CHECK(psi_n2(Cx(0.3, 0.4)).value == doctest::Approx(1.0666667).epsilon(1e-7));
    CHECK(psi_n2(Cx(0.8, 0.2)).value == doctest::Approx(0.1302083).epsilon(1e-6));
    CHECK(psi_n2(Cx(0, 3)).value == doctest::Approx(0.01097394).epsilon(1e-6));
    CHECK(psi_n2(Cx(0, 4)).value == doctest::Approx(0.00260417).epsilon(1e-5));
    CHECK(psi_n2(Cx(0.3, 0.4)).std_error == 0.0);
  }

  TEST_CASE("n = 2 closed form matches quadrature of the definition in every branch") {
    for (Cx z : {Cx(0.3, 0.4), Cx(0.8, 0.2), Cx(1.4, 0.5), Cx(-0.8, 0.2), Cx(0, 3), Cx(-2, 0.6428571), Cx(0.5, 0.5)})
      CHECK(psi_n2(z).value == doctest::Approx(psi_grid(z, 2, 2000000)).epsilon(1e-5));
  }

  TEST_CASE("Monte Carlo and polar evaluators match quadrature for n = 3, 4") {
    for (Cx z : {Cx(0.3, 0.4), Cx(-1.2, 0.7), Cx(0.5, 1.5), Cx(1.8, 0.3)}) {
      const double truth = psi_grid(z, 3, 1500);
      check_close(psi_mc(z, 3), truth, 3e-3);
      check_close(psi_polar(z, 3, kDefaultSamples, 99), truth, 3e-3);
    }
    const Cx z(0.4, 0.9);
    const double truth4 = psi_grid(z, 4, 160);
    check_close(psi_mc(z, 4), truth4, 2e-2);
    check_close(psi_polar(z, 4, kDefaultSamples, 7), truth4, 2e-2);
  }

  TEST_CASE("closed forms in their zones") {
    for (int n : {2, 3, 4, 5}) {
      for (Cx z : {Cx(0.1, 0.2), Cx(-0.15, 0.05), Cx(0.0, 0.29)}) {
        const DensityEstimate e = psi_closed_small(z, n);
        CHECK(e.std_error == 0.0);
        check_close(psi_mc(z, n), e.value, 1e-9);
      }
      for (Cx z : {Cx(0, 4), Cx(3, 2), Cx(-5, 0.5)}) {
        const DensityEstimate e = psi_closed_large(z, n);
        check_close(psi_mc(z, n), e.value, 1e-9);
      }
    }
    CHECK_THROWS_AS(psi_closed_small(Cx(0.5, 0.5), 3), std::domain_error);
    CHECK_THROWS_AS(psi_closed_large(Cx(1, 1), 3), std::domain_error);
    // Closed-small equals the n = 2 closed form near the origin.
    CHECK(psi_closed_small(Cx(0.1, 0.2), 2).value == doctest::Approx(psi_n2(Cx(0.1, 0.2)).value));
  }

  TEST_CASE("inversion and reflection laws") {
    for (int n : {2, 3, 4}) {
      for (Cx z : {Cx(0.5, 0.5), Cx(-1.3, 0.4), Cx(0.2, 1.7)}) {
        const DensityEstimate a = psi_mc(z, n, kDefaultSamples, 1);
        DensityEstimate b = psi_mc(1.0 / z, n, kDefaultSamples, 2);
        const double s = std::pow(std::norm(z), -2.0);
        b.value *= s;
        b.std_error *= s;
        CHECK(std::abs(a.value - b.value) <= 4.0 * std::hypot(a.std_error, b.std_error) + 1e-12 * a.value);
        const DensityEstimate c = psi_mc(std::conj(z), n, kDefaultSamples, 3);
        const DensityEstimate d = psi_mc(-z, n, kDefaultSamples, 4);
        CHECK(std::abs(a.value - c.value) <= 4.0 * std::hypot(a.std_error, c.std_error) + 1e-12 * a.value);
        CHECK(std::abs(a.value - d.value) <= 4.0 * std::hypot(a.std_error, d.std_error) + 1e-12 * a.value);
      }
    }
  }

  TEST_CASE("psi dispatch") {
    CHECK(psi(Cx(0.3, 0.4), 2).method == DensityMethod::kClosedN2);
    CHECK(psi(Cx(0.1, 0.1), 3).method == DensityMethod::kClosedSmall);
    CHECK(psi(Cx(0, 4), 3).method == DensityMethod::kClosedLarge);
    CHECK(psi(Cx(1, 1), 3).method == DensityMethod::kMonteCarlo);
    CHECK(psi(Cx(1, 1), 3, DensityChoice::kPolar).method == DensityMethod::kPolar);
    CHECK_THROWS_AS(psi(Cx(1, 0), 3), std::domain_error);
    CHECK_THROWS_AS(psi(Cx(1, 1), 1), std::domain_error);
    CHECK_THROWS_AS(psi(Cx(1, 1), 9), std::domain_error);
    CHECK_THROWS_AS(psi_mc(Cx(1, 1), 3, 0), std::domain_error);
  }

  TEST_CASE("estimates are reproducible from the seed") {
    const auto a = psi_mc(Cx(0.7, 0.9), 4, 4096, 17), b = psi_mc(Cx(0.7, 0.9), 4, 4096, 17);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(psi_mc(Cx(0.7, 0.9), 4, 4096, 18).value != a.value);
  }

  TEST_CASE("repulsion constant") {
    CHECK(repulsion_constant(0.0, 2).value == doctest::Approx(8.0 / 3.0));
    CHECK(repulsion_constant(0.0, 3).value == doctest::Approx(16.0 / 3.0).epsilon(1e-6));
    // Independent 2-D midpoint rule for x0 = 0.3, n = 3.
    const double x0 = 0.3;
    const int N = 2000;
    double s = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double t1 = -1 + 2.0 * (i + 0.5) / N, t2 = -1 + 2.0 * (j + 0.5) / N;
        const double c = t1 * x0 * x0 + 2 * t2 * x0 * x0 * x0;
        const double l = 2 * t1 * x0 + 3 * t2 * x0 * x0;
        if (std::abs(c) > 1 || std::abs(l) > 1) continue;
        const double f = 2 * t1 + 6 * t2 * x0;
        s += f * f;
      }
    s *= 4.0 / (static_cast<double>(N) * N);
    const auto a = repulsion_constant(x0, 3);
    CHECK(a.value == doctest::Approx(s).epsilon(1e-3));
    CHECK(a.value == doctest::Approx(9.6533).epsilon(1e-4));
    // Near the real axis psi(x0 + iy) ~ y A(x0); for n = 3, x0 = 0 the ratio is 1 + y^2.
    for (double y : {0.2, 0.1, 0.05}) CHECK(psi_mc(Cx(0, y), 3).value / (y * 16.0 / 3.0) == doctest::Approx(1 + y * y).epsilon(1e-6));
  }

  TEST_CASE("zeta against boost") {
    for (int d = 2; d <= 12; ++d) CHECK(zeta(d) == doctest::Approx(boost::math::zeta(static_cast<double>(d))).epsilon(1e-14));
    CHECK_THROWS(zeta(1));
  }

  TEST_CASE("region integrals") {
    // Midpoint rule of the n = 2 closed form over the rectangle; the hand value is 0.176.
    auto rect = ComplexRegion::parse("rect:0.1,0.4,0.35,0.75");
    const int N = 1000;
    double s = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) s += psi_n2(Cx(0.1 + 0.3 * (i + 0.5) / N, 0.35 + 0.4 * (j + 0.5) / N)).value;
    s *= 0.3 * 0.4 / (static_cast<double>(N) * N);
    const auto I = integrate_psi(rect, 2, 1 << 16);
    CHECK(std::abs(I.value - s) <= 4 * I.std_error + 1e-6);
    CHECK(I.value == doctest::Approx(0.176).epsilon(0.005));

    // Disk by polar midpoint rule.
    auto disk = ComplexRegion::parse("disk:0,1,0.3");
    double sd = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double r = 0.3 * (i + 0.5) / N, th = 2 * std::numbers::pi * (j + 0.5) / N;
        sd += r * psi_n2(Cx(r * std::cos(th), 1 + r * std::sin(th))).value;
      }
    sd *= 0.3 * 2 * std::numbers::pi / (static_cast<double>(N) * N);
    const auto D = integrate_psi(disk, 2, 1 << 16);
    CHECK(std::abs(D.value - sd) <= 4 * D.std_error + 1e-5 * sd);

    // The measure psi dA is invariant under z -> 1/z.
    auto omega = ComplexRegion::parse("rect:0.2,0.6,0.3,0.8");
    for (int n : {2, 3}) {
      const auto a = integrate_psi(omega, n, 1 << 18, 5), b = integrate_psi(omega.invert(), n, 1 << 18, 6);
      CHECK(std::abs(a.value - b.value) <= 4 * std::hypot(a.std_error, b.std_error) + 1e-9);
    }
  }

  TEST_CASE("prediction") {
    const DensityEstimate I{0.176, 0.001, DensityMethod::kClosedN2, 0};
    const auto p = predicted_count(200.0, 2, I);
    CHECK(p.value == doctest::Approx(200.0 * 200 * 200 * 0.176 / (2 * boost::math::zeta(3.0))));
    CHECK(p.std_error == doctest::Approx(p.value / 176.0));
  }
}
