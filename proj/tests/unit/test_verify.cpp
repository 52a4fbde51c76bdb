#include <doctest.h>

#include <cmath>

#include "algdist/verify.hpp"

using namespace algdist;
using Cx = std::complex<double>;

TEST_SUITE("verify") {
  TEST_CASE("config parsing") {
    auto c = VerifyConfig::parse(
        "# thresholds\n"
        "sigma = 4\n"
        "\n"
        "max_fail_fraction=0.05  # trailing comment\n"
        "n = 3\n"
        "q_list = 5, 10, 20\n"
        "region = rect:0.1,0.4,0.35,0.75\n"
        "seed = 12\n");
    CHECK(c.sigma == 4.0);
    CHECK(c.max_fail_fraction == 0.05);
    CHECK(c.n == 3);
    CHECK(c.q_list == std::vector<Coeff>{5, 10, 20});
    CHECK(c.region == "rect:0.1,0.4,0.35,0.75");
    CHECK(c.seed == 12);
    CHECK(c.terminal_tolerance == VerifyConfig{}.terminal_tolerance);
    CHECK_THROWS_AS(VerifyConfig::parse("colour = red\n"), std::invalid_argument);
    CHECK_THROWS(VerifyConfig::parse("sigma 4\n"));
    CHECK_THROWS(VerifyConfig::parse("n = three\n"));
  }

  TEST_CASE("grid parsing") {
    auto g = GridSpec::parse("-1:1:3,0.5:1.5:2");
    auto pts = g.points();
    REQUIRE(pts.size() == 6);
    CHECK(pts[0] == Cx(-1, 0.5));
    CHECK(pts[2] == Cx(1, 0.5));
    CHECK(pts[3] == Cx(-1, 1.5));
    CHECK(g.x(1) == doctest::Approx(0.0));
    CHECK(GridSpec::parse("0:0:1,1:1:1").points().size() == 1);
    CHECK_THROWS(GridSpec::parse("0:1:0,1:2:2"));
    CHECK_THROWS(GridSpec::parse("1:0:2,1:2:2"));
    CHECK_THROWS(GridSpec::parse("0:1:2"));
  }

  TEST_CASE("trend fit recovers a synthetic line") {
    std::vector<ConvergenceRow> rows;
    for (Coeff Q : {10, 20, 40, 80}) {
      ConvergenceRow r;
      r.Q = Q;
      r.ratio = 1.0 + 0.02 + 3.0 / static_cast<double>(Q);
      rows.push_back(r);
    }
    auto f = fit_trend(rows);
    CHECK(f.fitted);
    CHECK(f.slope == doctest::Approx(3.0));
    CHECK(f.intercept == doctest::Approx(0.02));
    CHECK(f.r_squared == doctest::Approx(1.0));
    CHECK_FALSE(fit_trend(std::span<const ConvergenceRow>(rows.data(), 1)).fitted);
  }

  TEST_CASE("agreement score") {
    DensityEstimate a{1.0, 0.0}, b{1.0 + 1e-14, 0.0}, c{1.1, 0.0}, d{1.0, 0.03}, e{1.1, 0.04};
    CHECK(agreement_score(a, b) == 0.0);
    CHECK(std::isinf(agreement_score(a, c)));
    CHECK(agreement_score(d, e) == doctest::Approx(2.0));
    CHECK(to_string(Verdict::kPass) == "PASS");
    CHECK(to_string(Verdict::kInconclusive) == "INCONCLUSIVE");
  }

  TEST_CASE("symmetry certificate on a small quadratic count") {
    auto r = symmetry_certificate(2, 6, ComplexRegion::parse("rect:0.1,0.6,0.2,0.9"));
    CHECK(r.verdict == Verdict::kPass);
    for (const auto& c : r.counts) CHECK(c.psi == r.counts[0].psi);
    CHECK(r.counts[0].psi > 0);
  }

  TEST_CASE("convergence sweep on quadratics") {
    VerifyConfig cfg;
    cfg.budget = 1 << 14;
    cfg.terminal_tolerance = 0.05;
    std::vector<Coeff> qs{25, 50, 100};
    auto rep = convergence_sweep(2, qs, ComplexRegion::parse("rect:0.1,0.4,0.35,0.75"), cfg);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.integral.value == doctest::Approx(0.176).epsilon(0.01));
    for (const auto& r : rep.rows) {
      CHECK(r.ratio == doctest::Approx(static_cast<double>(r.psi_exact) / r.predicted));
      CHECK(r.reducible > 0);
    }
    CHECK(rep.deviation_decreasing);
    CHECK(rep.verdict == Verdict::kPass);
  }

  TEST_CASE("density agreement on a small grid") {
    VerifyConfig cfg;
    cfg.samples = 1 << 14;
    auto pts = GridSpec::parse("-1.5:1.5:3,0.3:1.8:3").points();
    for (int n : {2, 3}) {
      auto rep = density_agreement(n, pts, cfg);
      CHECK(rep.points.size() == pts.size());
      CHECK(rep.verdict == Verdict::kPass);
      CHECK(rep.inversion_verdict == Verdict::kPass);
    }
    std::vector<Cx> bad{Cx(1, 0)};
    CHECK_THROWS_AS(density_agreement(3, bad, cfg), std::domain_error);
  }
}
