#include <doctest.h>

#include <cmath>
#include <random>

#include "algdist/simulate.hpp"

using namespace algdist;
using Cx = std::complex<double>;

TEST_SUITE("simulate") {
  TEST_CASE("coefficients are uniform on [-1, 1]") {
    std::mt19937_64 rng(1);
    const int bins = 20;
    std::vector<int> hist(bins, 0);
    const int draws = 40000;
    for (int i = 0; i < draws / 4; ++i) {
      auto a = sample_poly(3, rng);
      REQUIRE(a.size() == 4);
      CHECK(a[3] != 0.0);
      for (double c : a) {
        REQUIRE(c >= -1.0);
        REQUIRE(c <= 1.0);
        ++hist[static_cast<std::size_t>(std::min(bins - 1, static_cast<int>((c + 1) / 2 * bins)))];
      }
    }
    double chi2 = 0;
    const double expect = static_cast<double>(draws) / bins;
    for (int h : hist) chi2 += (h - expect) * (h - expect) / expect;
    // 19 degrees of freedom; the 0.999 quantile is about 43.8.
    CHECK(chi2 < 43.8);
  }

  TEST_CASE("results do not depend on the thread count") {
    auto omega = ComplexRegion::parse("disk:0,1,0.5");
    auto a = estimate_EN(omega, 3, 50000, 77, 1), b = estimate_EN(omega, 3, 50000, 77, 3);
    CHECK(a.per_k_count == b.per_k_count);
    CHECK(a.mean_N == b.mean_N);
    CHECK(a.ambiguous_roots == b.ambiguous_roots);
    auto c = estimate_EN(omega, 3, 50000, 78, 1);
    CHECK(c.per_k_count != a.per_k_count);
  }

  TEST_CASE("quadratic mean against an independent sampler") {
    auto omega = ComplexRegion::parse("rect:0.1,0.4,0.35,0.75");
    const std::uint64_t trials = 400000;
    auto s = estimate_EN(omega, 2, trials, 5, 1);
    std::mt19937_64 rng(999);
    std::uniform_real_distribution<double> u(-1, 1);
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng);
      const double disc = b * b - 4 * a * c;
      int k = 0;
      if (disc < 0) {
        const Cx r(-b / (2 * a), std::sqrt(-disc) / (2 * std::abs(a)));
        k = omega.contains(r) + omega.contains(std::conj(r));
      }
      sum += k;
      sum2 += k * k;
    }
    const double m = sum / trials, se = std::sqrt((sum2 / trials - m * m) / trials);
    CHECK(std::abs(s.mean_N - m) <= 4 * std::hypot(se, s.std_error));
    CHECK(s.per_k_count.size() == 3);
    std::uint64_t tot = 0;
    for (auto c : s.per_k_count) tot += c;
    CHECK(tot == trials);
  }

  TEST_CASE("volumes of the count classes add up to the cube") {
    auto omega = ComplexRegion::parse("disk:0,1,0.8");
    for (int n : {2, 3, 4}) {
      auto v = volume_Ak_estimate(omega, n, 20000, 3, 1);
      REQUIRE(v.volume.size() == static_cast<std::size_t>(n) + 1);
      double s = 0;
      for (double x : v.volume) s += x;
      CHECK(s == doctest::Approx(std::pow(2.0, n + 1)));
      for (double e : v.std_error) CHECK(e >= 0.0);
    }
  }

  TEST_CASE("invalid arguments") {
    auto omega = ComplexRegion::parse("disk:0,1,0.3");
    CHECK_THROWS(estimate_EN(omega, 1, 10, 1));
    CHECK_THROWS(estimate_EN(omega, 3, 0, 1));
  }
}
