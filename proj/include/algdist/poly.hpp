#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace algdist {

using Coeff = std::int64_t;

/// Highest polynomial degree the enumeration and root-finding paths support.
inline constexpr int kMaxDegree = 8;

/// Dense integer polynomial a_0 + a_1 x + ... + a_m x^m.
///
/// Trailing zero coefficients are trimmed on construction, so `degree()` is
/// always the index of the last nonzero entry. The zero polynomial has
/// degree -1 and is rejected by every operation that needs a height.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Coeff> coeffs);
  IntPolynomial(std::initializer_list<Coeff> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const Coeff> coeffs() const { return coeffs_; }

  /// Coefficient of x^i; zero above the degree.
  Coeff operator[](int i) const;
  Coeff leading() const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  std::vector<Coeff> coeffs_;
};

Coeff height(const IntPolynomial& p);
Coeff content(const IntPolynomial& p);
bool is_primitive(const IntPolynomial& p);

std::complex<double> evaluate(const IntPolynomial& p, std::complex<double> z);
IntPolynomial derivative(const IntPolynomial& p);

/// x^m p(1/x), sign-normalized to a positive leading coefficient.
/// Roots map z -> 1/z and the height is unchanged. Requires a_0 != 0.
IntPolynomial reciprocal(const IntPolynomial& p);

/// +-p(-x), sign-normalized to a positive leading coefficient.
IntPolynomial negate_argument(const IntPolynomial& p);

/// Multiply by -1 if the leading coefficient is negative.
IntPolynomial sign_normalized(IntPolynomial p);

IntPolynomial operator*(const IntPolynomial& p, Coeff c);
IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q);

/// "3x^2 - x + 7" style rendering, highest degree first.
std::string to_text(const IntPolynomial& p);
/// "a_0,a_1,...,a_m".
std::string to_csv(const IntPolynomial& p);

IntPolynomial parse_csv(std::string_view text);
/// Accepts the output of `to_text` (and the usual variations: `x`, `x^1`,
/// implicit unit coefficients, arbitrary spacing).
IntPolynomial parse_text(std::string_view text);

}  // namespace algdist
