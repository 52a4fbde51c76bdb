#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "algdist/counting.hpp"
#include "algdist/density.hpp"
#include "algdist/region.hpp"

namespace algdist {

enum class Verdict : std::uint8_t { kPass, kFail, kInconclusive };
std::string_view to_string(Verdict v);

/// Thresholds and defaults shared by the certificates. Loaded from a
/// `key = value` file; `#` starts a comment.
struct VerifyConfig {
  double sigma = 3.0;                 // agreement threshold in combined standard errors
  double max_fail_fraction = 0.01;    // share of grid points allowed to disagree
  double terminal_tolerance = 0.05;   // |ratio - 1| allowed at the largest Q
  std::uint64_t budget = 1 << 22;     // integrand evaluations for region integrals
  std::uint64_t samples = kDefaultSamples;  // per pointwise density estimate
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;

  int n = 2;
  Coeff q = 10;
  std::vector<Coeff> q_list{25, 50, 100, 200};
  std::string region = "disk:0,1,0.3";
  std::string grid = "-2:2:8,0.1:2:8";

  static VerifyConfig parse(std::string_view text);
  static VerifyConfig load(const std::string& path);
  /// Applies one `key = value` setting; throws std::invalid_argument on unknown keys.
  void set(std::string_view key, std::string_view value);
};

/// Axis grid "x0:x1:nx,y0:y1:ny" with inclusive endpoints, row-major from y0.
struct GridSpec {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
  int nx = 1, ny = 1;

  static GridSpec parse(std::string_view text);
  std::vector<std::complex<double>> points() const;
  double x(int i) const;
  double y(int j) const;
};

struct TrendFit {
  double slope = 0.0;      // of |ratio - 1| against 1/Q
  double intercept = 0.0;
  double r_squared = 0.0;
  bool fitted = false;
};

struct ConvergenceRow {
  int n = 0;
  Coeff Q = 0;
  std::string region;
  std::uint64_t psi_exact = 0;
  double predicted = 0.0;
  double predicted_std_error = 0.0;
  double ratio = 0.0;
  double scaled_residual = 0.0;  // (psi_exact - predicted) / Q^n
  std::uint64_t ambiguous = 0;
  std::uint64_t reducible = 0;
  double runtime_s = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  DensityEstimate integral;
  TrendFit fit;
  bool deviation_decreasing = false;  // |ratio - 1| non-increasing along the sweep
  bool residual_bounded = false;      // scaled residual not strictly increasing throughout
  Verdict verdict = Verdict::kFail;
};

ConvergenceReport convergence_sweep(int n, std::span<const Coeff> q_list, const ComplexRegion& omega,
                                    const VerifyConfig& config = {});
/// Least-squares fit of |ratio - 1| against 1/Q.
TrendFit fit_trend(std::span<const ConvergenceRow> rows);

struct SymmetryReport {
  std::array<std::string, 4> labels{"omega", "conjugate", "negate", "invert"};
  std::array<CountResult, 4> counts;
  Verdict verdict = Verdict::kFail;
};

SymmetryReport symmetry_certificate(int n, Coeff Q, const ComplexRegion& omega, const VerifyConfig& config = {});

struct EvaluatorValue {
  std::string name;
  DensityEstimate estimate;
};

struct AgreementPoint {
  std::complex<double> z;
  std::vector<EvaluatorValue> values;
  double worst_z_score = 0.0;  // largest |a - b| / combined error over evaluator pairs
  bool agree = false;
  /// psi(1/z) |z|^-4 against psi(z), both by psi_mc.
  double inversion_z_score = 0.0;
  bool inversion_agree = false;
};

struct AgreementReport {
  std::vector<AgreementPoint> points;
  std::size_t failing_points = 0;
  std::size_t failing_inversion = 0;
  Verdict verdict = Verdict::kFail;
  Verdict inversion_verdict = Verdict::kFail;
};

/// |a - b| measured in combined standard errors. Differences below 1e-12
/// relative count as zero, so exact values that agree to rounding are equal.
double agreement_score(const DensityEstimate& a, const DensityEstimate& b);

AgreementReport density_agreement(int n, std::span<const std::complex<double>> grid, const VerifyConfig& config = {});

}  // namespace algdist
