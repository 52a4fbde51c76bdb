#include "algdist/poly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace algdist {

namespace {

void trim(std::vector<Coeff>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

void require_nonzero(const IntPolynomial& p, const char* what) {
  if (p.is_zero()) throw std::domain_error(std::string(what) + ": zero polynomial");
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Coeff parse_int(std::string_view s) {
  s = strip(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Coeff v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

IntPolynomial::IntPolynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
  trim(coeffs_);
}

IntPolynomial::IntPolynomial(std::initializer_list<Coeff> coeffs) : coeffs_(coeffs) {
  trim(coeffs_);
}

Coeff IntPolynomial::operator[](int i) const {
  return (i >= 0 && i <= degree()) ? coeffs_[static_cast<std::size_t>(i)] : 0;
}

Coeff IntPolynomial::leading() const {
  require_nonzero(*this, "leading");
  return coeffs_.back();
}

Coeff height(const IntPolynomial& p) {
  require_nonzero(p, "height");
  Coeff h = 0;
  for (Coeff a : p.coeffs()) h = std::max(h, a < 0 ? -a : a);
  return h;
}

Coeff content(const IntPolynomial& p) {
  require_nonzero(p, "content");
  Coeff g = 0;
  for (Coeff a : p.coeffs()) g = std::gcd(g, a);
  return g;
}

bool is_primitive(const IntPolynomial& p) { return content(p) == 1; }

std::complex<double> evaluate(const IntPolynomial& p, std::complex<double> z) {
  std::complex<double> acc{0.0, 0.0};
  for (int i = p.degree(); i >= 0; --i) acc = acc * z + static_cast<double>(p[i]);
  return acc;
}

IntPolynomial derivative(const IntPolynomial& p) {
  if (p.degree() < 1) return IntPolynomial{};
  std::vector<Coeff> d(static_cast<std::size_t>(p.degree()));
  for (int i = 1; i <= p.degree(); ++i) d[static_cast<std::size_t>(i - 1)] = p[i] * i;
  return IntPolynomial(std::move(d));
}

IntPolynomial sign_normalized(IntPolynomial p) {
  if (!p.is_zero() && p.leading() < 0) return p * Coeff{-1};
  return p;
}

IntPolynomial reciprocal(const IntPolynomial& p) {
  require_nonzero(p, "reciprocal");
  if (p[0] == 0) throw std::domain_error("reciprocal: constant term is zero");
  std::vector<Coeff> c(p.coeffs().rbegin(), p.coeffs().rend());
  return sign_normalized(IntPolynomial(std::move(c)));
}

IntPolynomial negate_argument(const IntPolynomial& p) {
  require_nonzero(p, "negate_argument");
  std::vector<Coeff> c(p.coeffs().begin(), p.coeffs().end());
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return sign_normalized(IntPolynomial(std::move(c)));
}

IntPolynomial operator*(const IntPolynomial& p, Coeff c) {
  std::vector<Coeff> out(p.coeffs().begin(), p.coeffs().end());
  for (Coeff& a : out) a *= c;
  return IntPolynomial(std::move(out));
}

IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return IntPolynomial{};
  std::vector<Coeff> out(static_cast<std::size_t>(p.degree() + q.degree() + 1), 0);
  for (int i = 0; i <= p.degree(); ++i)
    for (int j = 0; j <= q.degree(); ++j) out[static_cast<std::size_t>(i + j)] += p[i] * q[j];
  return IntPolynomial(std::move(out));
}

std::string to_text(const IntPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    Coeff a = p[i];
    if (a == 0) continue;
    Coeff mag = a < 0 ? -a : a;
    if (first) {
      if (a < 0) os << '-';
    } else {
      os << (a < 0 ? " - " : " + ");
    }
    if (mag != 1 || i == 0) os << mag;
    if (i >= 1) os << 'x';
    if (i >= 2) os << '^' << i;
    first = false;
  }
  return os.str();
}

std::string to_csv(const IntPolynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  for (int i = 0; i <= p.degree(); ++i) {
    if (i) os << ',';
    os << p[i];
  }
  return os.str();
}

IntPolynomial parse_csv(std::string_view text) {
  std::vector<Coeff> c;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    c.push_back(parse_int(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return IntPolynomial(std::move(c));
}

IntPolynomial parse_text(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty polynomial text");

  std::vector<Coeff> c;
  std::size_t i = 0;
  while (i < s.size()) {
    Coeff sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    const bool had_digits = j > i;
    Coeff mag = had_digits ? parse_int(std::string_view(s).substr(i, j - i)) : 1;
    i = j;
    if (i < s.size() && s[i] == '*') ++i;
    int power = 0;
    if (i < s.size() && s[i] == 'x') {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::size_t k = i;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k == i) throw std::invalid_argument("missing exponent in '" + s + "'");
        power = static_cast<int>(parse_int(std::string_view(s).substr(i, k - i)));
        i = k;
      }
    } else if (!had_digits) {
      throw std::invalid_argument("dangling sign in '" + s + "'");
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw std::invalid_argument("unexpected character in '" + s + "'");
    if (power > kMaxDegree * 4) throw std::invalid_argument("exponent too large");
    if (c.size() <= static_cast<std::size_t>(power)) c.resize(static_cast<std::size_t>(power) + 1, 0);
    c[static_cast<std::size_t>(power)] += sign * mag;
  }
  return IntPolynomial(std::move(c));
}

}  // namespace algdist
