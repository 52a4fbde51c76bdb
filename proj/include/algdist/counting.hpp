#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "algdist/poly.hpp"
#include "algdist/region.hpp"
#include "algdist/roots.hpp"

namespace algdist {

/// An integer polynomial that is primitive, irreducible over Q, of degree
/// at least 1 and with positive leading coefficient: the minimal polynomial
/// of each of its roots.
class PrimePolynomial {
 public:
  /// Throws std::invalid_argument if `p` is not prime.
  explicit PrimePolynomial(IntPolynomial p);
  static std::optional<PrimePolynomial> make(const IntPolynomial& p);

  const IntPolynomial& inner() const { return inner_; }

 private:
  IntPolynomial inner_;
};

/// True iff `p` (degree >= 1) has no factorization into two integer
/// polynomials of positive degree. The content is ignored.
bool is_irreducible_over_rationals(const IntPolynomial& p);
bool is_prime_polynomial(const IntPolynomial& p);

struct CountOptions {
  RootOptions roots;
  /// Also test every enumerated polynomial for reducibility. Costs a
  /// rational-root search on polynomials with only real roots as well.
  bool compute_reducible = true;
  /// Worker threads inside one shard; 0 picks the hardware concurrency.
  unsigned threads = 1;
};

struct Shard {
  std::uint32_t index = 0;
  std::uint32_t total = 1;
};

struct CountResult {
  int n = 0;
  Coeff Q = 0;
  std::string region;

  /// Number of algebraic numbers of degree <= n and height <= Q in the region.
  std::uint64_t psi = 0;
  /// gamma[k - 1]: prime polynomials with exactly k roots in the region.
  std::vector<std::uint64_t> gamma;
  /// Roots of prime polynomials whose membership could not be certified.
  std::uint64_t ambiguous = 0;
  /// Reducible polynomials of degree 2..n with a_m in [1, Q] and the other
  /// coefficients in [-Q, Q]; meaningful only if `reducible_computed`.
  std::uint64_t reducible = 0;
  bool reducible_computed = false;
  /// degree_breakdown[m]: roots in the region whose minimal polynomial has degree m.
  std::vector<std::uint64_t> degree_breakdown;

  /// Shard indices covered by this result, sorted, out of `shard_total`.
  std::vector<std::uint32_t> shards;
  std::uint32_t shard_total = 1;
  double runtime_s = 0.0;

  bool exact() const { return ambiguous == 0; }
  /// Certified bounds [psi, psi + ambiguous].
  std::uint64_t psi_upper() const { return psi + ambiguous; }
};

CountResult enumerate_count(int n, Coeff Q, const ComplexRegion& omega, const CountOptions& options = {});

/// Deterministic shard of the coefficient space. Work items are the pairs
/// (degree m, leading coefficient a_m) in lexicographic order; shard i of T
/// owns the items whose position is congruent to i mod T.
CountResult partitioned_enumerate(int n, Coeff Q, const ComplexRegion& omega, Shard shard,
                                  const CountOptions& options = {});

/// Sums shard results of the same (n, Q, region, shard_total). Throws
/// std::invalid_argument on overlapping shards or mismatched parameters.
CountResult merge(std::span<const CountResult> parts);

/// Reducible polynomials in the enumeration class (see CountResult::reducible).
std::uint64_t reducible_count(int n, Coeff Q, unsigned threads = 1);

namespace counting_detail {

/// Exact test for a root s/q of p, q > 0, by synthetic division by (q x - s).
bool has_root(std::span<const Coeff> a, Coeff s, Coeff q);
/// Rational-root search; `a_0 != 0` is required.
bool has_rational_root(std::span<const Coeff> a);
/// Exact division p / g; returns false if g does not divide p over Z.
bool divides(std::span<const Coeff> g, std::span<const Coeff> p);

}  // namespace counting_detail

}  // namespace algdist
