#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "algdist/poly.hpp"
#include "algdist/region.hpp"

namespace algdist {

enum class LatticeShape : std::uint8_t { kBox, kBall, kSimplex };

/// A bounded region A in R^d whose dilates tA have an exact integer
/// membership test for rational t: the box [lo, hi]^d with integer corners,
/// the closed unit ball, and the standard simplex {x >= 0, sum x <= 1}.
class LatticeRegion {
 public:
  static LatticeRegion box(int d, Coeff lo, Coeff hi);
  static LatticeRegion ball(int d);
  static LatticeRegion simplex(int d);

  int dimension() const { return d_; }
  LatticeShape shape() const { return shape_; }
  /// A is contained in [-N, N]^d.
  Coeff half_width() const { return half_width_; }
  std::optional<double> exact_volume() const { return volume_; }
  bool contains_origin() const;
  std::string name() const;

  /// Exact test of v in sA for rational s >= 0.
  bool contains_scaled(std::span<const Coeff> v, const Rational& s) const;
  /// Integer range of coordinate values that can occur in sA.
  std::pair<Coeff, Coeff> coordinate_range(const Rational& s) const;

 private:
  LatticeRegion(LatticeShape shape, int d, Coeff lo, Coeff hi);

  LatticeShape shape_;
  int d_;
  Coeff lo_, hi_;
  Coeff half_width_;
  std::optional<double> volume_;
};

/// Moebius function by trial division.
int mobius(std::uint64_t j);

/// Integer points in tA.
std::uint64_t lambda_count(const LatticeRegion& A, const Rational& t);
/// Integer points in tA whose coordinates have gcd 1 (the origin never counts).
std::uint64_t lambda_star_brute(const LatticeRegion& A, const Rational& t);
/// sum_{j=1}^{floor(N t)+1} mu(j) (lambda((t/j) A) - [0 in A]).
std::uint64_t lambda_star_mobius(const LatticeRegion& A, const Rational& t);

struct AsymptoticRow {
  double t = 0.0;
  std::uint64_t lambda_star = 0;
  double predicted = 0.0;     // Vol(A) t^d / zeta(d)
  double residual = 0.0;      // lambda_star - predicted
  double scaled = 0.0;        // residual / t^{d-1}
  double scaled_log = 0.0;    // residual / (t^{d-1} log t), reported for d = 2
  double ratio = 0.0;         // lambda_star / predicted
};

/// Requires a known volume. Counts use the Moebius route.
std::vector<AsymptoticRow> asymptotic_report(const LatticeRegion& A, std::span<const Rational> ts);

struct TailCheck {
  int d = 2;
  std::uint64_t M = 1;
  double partial = 0.0;   // sum_{j<=M} mu(j) / j^d
  double gap = 0.0;       // |partial - 1/zeta(d)|
  double bound = 0.0;     // 1 / ((d-1) M^{d-1})
  bool holds = false;
};

TailCheck mobius_tail_check(int d, std::uint64_t M);

}  // namespace algdist
