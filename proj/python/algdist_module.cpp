#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "algdist/counting.hpp"
#include "algdist/density.hpp"
#include "algdist/lattice.hpp"
#include "algdist/roots.hpp"
#include "algdist/simulate.hpp"

namespace py = pybind11;
using namespace algdist;

namespace {

DensityChoice method_from(const std::string& m) {
  if (m == "auto") return DensityChoice::kAuto;
  if (m == "mc") return DensityChoice::kMonteCarlo;
  if (m == "polar") return DensityChoice::kPolar;
  throw std::invalid_argument("method must be auto, mc or polar");
}

LatticeRegion lattice_from(const std::string& shape, int d, Coeff lo, Coeff hi) {
  if (shape == "box") return LatticeRegion::box(d, lo, hi);
  if (shape == "ball") return LatticeRegion::ball(d);
  if (shape == "simplex") return LatticeRegion::simplex(d);
  throw std::invalid_argument("shape must be box, ball or simplex");
}

}  // namespace

PYBIND11_MODULE(_algdist, m) {
  m.doc() = "Counting and density of complex algebraic numbers";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::domain_error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<DensityEstimate>(m, "DensityEstimate")
      .def_readonly("value", &DensityEstimate::value)
      .def_readonly("std_error", &DensityEstimate::std_error)
      .def_readonly("samples", &DensityEstimate::samples)
      .def_property_readonly("method", [](const DensityEstimate& e) { return std::string(to_string(e.method)); })
      .def("__repr__", [](const DensityEstimate& e) {
        return "DensityEstimate(value=" + std::to_string(e.value) + ", std_error=" + std::to_string(e.std_error) +
               ", method='" + std::string(to_string(e.method)) + "')";
      });

  py::class_<CountResult>(m, "CountResult")
      .def_readonly("n", &CountResult::n)
      .def_readonly("Q", &CountResult::Q)
      .def_readonly("region", &CountResult::region)
      .def_readonly("psi", &CountResult::psi)
      .def_readonly("gamma", &CountResult::gamma)
      .def_readonly("ambiguous", &CountResult::ambiguous)
      .def_readonly("reducible", &CountResult::reducible)
      .def_readonly("reducible_computed", &CountResult::reducible_computed)
      .def_readonly("degree_breakdown", &CountResult::degree_breakdown)
      .def_readonly("runtime_s", &CountResult::runtime_s);

  py::class_<RandomPolySummary>(m, "RandomPolySummary")
      .def_readonly("n", &RandomPolySummary::n)
      .def_readonly("trials", &RandomPolySummary::trials)
      .def_readonly("per_k_count", &RandomPolySummary::per_k_count)
      .def_readonly("per_k_frequency", &RandomPolySummary::per_k_frequency)
      .def_readonly("mean_N", &RandomPolySummary::mean_N)
      .def_readonly("std_error", &RandomPolySummary::std_error)
      .def_readonly("ambiguous_roots", &RandomPolySummary::ambiguous_roots);

  m.def(
      "count",
      [](int n, Coeff q, const std::string& region, unsigned threads, bool reducible) {
        CountOptions opt;
        opt.threads = threads;
        opt.compute_reducible = reducible;
        py::gil_scoped_release release;
        return enumerate_count(n, q, ComplexRegion::parse(region), opt);
      },
      py::arg("n"), py::arg("q"), py::arg("region"), py::arg("threads") = 1, py::arg("reducible") = true,
      "Exact count of algebraic numbers of degree <= n and height <= q in a region given in the DSL.");

  m.def(
      "psi",
      [](std::complex<double> z, int n, const std::string& method, std::uint64_t samples, std::uint64_t seed) {
        return psi(z, n, method_from(method), samples, seed);
      },
      py::arg("z"), py::arg("n"), py::arg("method") = "auto", py::arg("samples") = kDefaultSamples,
      py::arg("seed") = kDefaultSeed, "Limit density psi(z).");
  m.def("psi_n2", &psi_n2, py::arg("z"));
  m.def("integrate_psi", [](const std::string& region, int n, std::uint64_t budget, std::uint64_t seed) {
        return integrate_psi(ComplexRegion::parse(region), n, budget, seed);
      }, py::arg("region"), py::arg("n"), py::arg("budget") = 1 << 22, py::arg("seed") = kDefaultSeed);
  m.def("predicted_count", [](double q, int n, const std::string& region, std::uint64_t budget, std::uint64_t seed) {
        Prediction p = predicted_count(q, n, ComplexRegion::parse(region), budget, seed);
        return py::make_tuple(p.value, p.std_error);
      }, py::arg("q"), py::arg("n"), py::arg("region"), py::arg("budget") = 1 << 22, py::arg("seed") = kDefaultSeed,
      "Returns (value, std_error).");
  m.def("repulsion_constant", &repulsion_constant, py::arg("x0"), py::arg("n"), py::arg("samples") = kDefaultSamples,
        py::arg("seed") = kDefaultSeed);
  m.def("zeta", &zeta, py::arg("d"));

  m.def("mobius", &mobius, py::arg("j"));
  m.def("lambda_star", [](const std::string& shape, int d, const std::string& t, Coeff lo, Coeff hi) {
        return lambda_star_mobius(lattice_from(shape, d, lo, hi), parse_rational(t));
      }, py::arg("shape"), py::arg("d"), py::arg("t"), py::arg("lo") = 0, py::arg("hi") = 1,
      "Primitive lattice points in t*A by Moebius inversion; t is a rational string such as '7/2'.");

  m.def("is_prime_polynomial", [](std::vector<Coeff> a) { return is_prime_polynomial(IntPolynomial(std::move(a))); },
        py::arg("coeffs"), "Coefficients a_0..a_m.");
  m.def("roots", [](std::vector<Coeff> a) {
        std::vector<std::complex<double>> out;
        for (const auto& r : find_roots(IntPolynomial(std::move(a)))) out.push_back(r.value);
        return out;
      }, py::arg("coeffs"), "Certified roots of an integer polynomial with coefficients a_0..a_m.");

  m.def("estimate_EN", [](const std::string& region, int n, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return estimate_EN(ComplexRegion::parse(region), n, trials, seed, threads);
      }, py::arg("region"), py::arg("n"), py::arg("trials"), py::arg("seed") = kDefaultSeed, py::arg("threads") = 1);
}
