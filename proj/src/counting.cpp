#include "algdist/counting.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "algdist/parallel.hpp"

namespace algdist {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

constexpr Coeff kDivisorTableLimit = 1 << 16;

const std::vector<std::vector<Coeff>>& divisor_table() {
  static const std::vector<std::vector<Coeff>> table = [] {
    std::vector<std::vector<Coeff>> t(static_cast<std::size_t>(kDivisorTableLimit) + 1);
    for (Coeff d = 1; d <= kDivisorTableLimit; ++d)
      for (Coeff k = d; k <= kDivisorTableLimit; k += d) t[static_cast<std::size_t>(k)].push_back(d);
    return t;
  }();
  return table;
}

/// Positive divisors of |v|, ascending; v != 0.
std::span<const Coeff> divisors(Coeff v, std::vector<Coeff>& scratch) {
  Coeff a = v < 0 ? -v : v;
  if (a <= kDivisorTableLimit) return divisor_table()[static_cast<std::size_t>(a)];
  scratch.clear();
  std::vector<Coeff> large;
  for (Coeff d = 1; d * d <= a; ++d) {
    if (a % d) continue;
    scratch.push_back(d);
    if (d != a / d) large.push_back(a / d);
  }
  scratch.insert(scratch.end(), large.rbegin(), large.rend());
  return scratch;
}

i128 l1_norm(std::span<const Coeff> a) {
  i128 s = 0;
  for (Coeff c : a) s += c < 0 ? -static_cast<i128>(c) : c;
  return s;
}

Coeff content_of(std::span<const Coeff> a) {
  Coeff g = 0;
  for (Coeff c : a) g = std::gcd(g, c < 0 ? -c : c);
  return g;
}

bool is_square(std::int64_t d) {
  if (d < 0) return false;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d)));
  while (s * s > d) --s;
  while ((s + 1) * (s + 1) <= d) ++s;
  return s * s == d;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Searches for a factor of exact degree d with positive leading coefficient.
/// Coefficients of any factor obey |b_i| <= C(d, i) * ||p||_2.
bool has_factor_of_degree(std::span<const Coeff> a, int d) {
  const int m = static_cast<int>(a.size()) - 1;
  double l2 = 0.0;
  for (Coeff c : a) l2 += static_cast<double>(c) * static_cast<double>(c);
  l2 = std::sqrt(l2);
  auto eval = [](std::span<const Coeff> c, i128 x) {
    i128 acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  const i128 p1 = eval(a, 1), pm1 = eval(a, -1), p2 = eval(a, 2);
  std::vector<Coeff> scratch_lead, scratch_const;
  auto leads = divisors(a[static_cast<std::size_t>(m)], scratch_lead);
  auto consts = divisors(a[0], scratch_const);
  std::vector<Coeff> bound(static_cast<std::size_t>(d) + 1);
  for (int i = 1; i < d; ++i) bound[static_cast<std::size_t>(i)] = static_cast<Coeff>(std::floor(binomial(d, i) * l2));
  std::vector<Coeff> g(static_cast<std::size_t>(d) + 1);
  for (Coeff lead : leads) {
    for (Coeff c0abs : consts) {
      for (int sign : {1, -1}) {
        g[0] = sign * c0abs;
        g[static_cast<std::size_t>(d)] = lead;
        for (int i = 1; i < d; ++i) g[static_cast<std::size_t>(i)] = -bound[static_cast<std::size_t>(i)];
        while (true) {
          const i128 g1 = eval(g, 1), gm1 = eval(g, -1), g2 = eval(g, 2);
          bool plausible = g1 != 0 && gm1 != 0 && g2 != 0 && p1 % g1 == 0 && pm1 % gm1 == 0 && p2 % g2 == 0;
          if (plausible && counting_detail::divides(g, a)) return true;
          int i = 1;
          while (i < d && g[static_cast<std::size_t>(i)] == bound[static_cast<std::size_t>(i)]) {
            g[static_cast<std::size_t>(i)] = -bound[static_cast<std::size_t>(i)];
            ++i;
          }
          if (i >= d) break;
          ++g[static_cast<std::size_t>(i)];
        }
      }
    }
  }
  return false;
}

/// Irreducibility of a polynomial with nonzero constant term and degree >= 2,
/// content already irrelevant (all tests are content-invariant).
bool irreducible_core(std::span<const Coeff> a) {
  const int m = static_cast<int>(a.size()) - 1;
  if (counting_detail::has_rational_root(a)) return false;
  for (int d = 2; d <= m / 2; ++d)
    if (has_factor_of_degree(a, d)) return false;
  return true;
}

struct Tally {
  std::uint64_t psi = 0;
  std::uint64_t ambiguous = 0;
  std::uint64_t reducible = 0;
  std::array<std::uint64_t, kMaxDegree + 1> gamma{};      // index k
  std::array<std::uint64_t, kMaxDegree + 1> by_degree{};  // index m

  void add(const Tally& o) {
    psi += o.psi;
    ambiguous += o.ambiguous;
    reducible += o.reducible;
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      gamma[i] += o.gamma[i];
      by_degree[i] += o.by_degree[i];
    }
  }
};

class Enumerator {
 public:
  Enumerator(int n, Coeff Q, const ComplexRegion* omega, const CountOptions& options)
      : n_(n), Q_(Q), omega_(omega), options_(options) {
    if (omega_) {
      bbox_ = omega_->bounding_box();
      pad_ = 1e-6 * (1.0 + omega_->extent());
    }
  }

  void run_item(int m, Coeff lead, Tally& t) const {
    if (m == 2) quadratics(lead, t);
    else if (m == 3) cubics(lead, t);
    else general(m, lead, t);
  }

 private:
  bool near_box(std::complex<double> z) const { return bbox_.contains(z, pad_); }

  static void record(int m, int inside, int ambiguous, Tally& t) {
    t.ambiguous += static_cast<std::uint64_t>(ambiguous);
    if (inside == 0) return;
    t.psi += static_cast<std::uint64_t>(inside);
    t.gamma[static_cast<std::size_t>(inside)] += 1;
    t.by_degree[static_cast<std::size_t>(m)] += static_cast<std::uint64_t>(inside);
  }

  /// Numeric classification with one refinement attempt on ambiguity.
  Membership classify_refined(CertifiedRoot root, std::span<const double> coeffs) const {
    Membership mem = classify(root, *omega_);
    if (mem != Membership::kAmbiguous) return mem;
    root = refine(root, coeffs, 1e6);
    return classify(root, *omega_);
  }

  void quadratics(Coeff a2, Tally& t) const {
    for (Coeff a1 = -Q_; a1 <= Q_; ++a1) {
      for (Coeff a0 = -Q_; a0 <= Q_; ++a0) {
        const std::int64_t disc = a1 * a1 - 4 * a2 * a0;
        if (options_.compute_reducible && (a0 == 0 || is_square(disc))) ++t.reducible;
        if (!omega_ || disc >= 0) continue;
        const double re = -static_cast<double>(a1) / (2.0 * static_cast<double>(a2));
        const double im = std::sqrt(static_cast<double>(-disc)) / (2.0 * static_cast<double>(a2));
        int inside = 0;
        for (int sign : {1, -1}) {
          std::complex<double> z(re, sign * im);
          if (!near_box(z)) continue;
          const double c[3] = {static_cast<double>(a0), static_cast<double>(a1), static_cast<double>(a2)};
          CertifiedRoot root{z, residual_radius(c, z), 2, false, Precision::kDouble};
          Membership mem = classify(root, *omega_);
          if (mem == Membership::kAmbiguous) {
            // Roots of quadratics are exact surds, so boundary cases are decided exactly.
            SurdPoint exact{Rational(-a1, 2 * a2), Rational(sign, 2 * a2), Rational(-disc)};
            mem = omega_->contains_exact(exact) ? Membership::kInside : Membership::kOutside;
          }
          inside += mem == Membership::kInside;
        }
        if (inside == 0) continue;
        if (std::gcd(std::gcd(a2, a1 < 0 ? -a1 : a1), a0 < 0 ? -a0 : a0) != 1) continue;
        record(2, inside, 0, t);
      }
    }
  }

  void cubics(Coeff a3, Tally& t) const {
    for (Coeff a2 = -Q_; a2 <= Q_; ++a2) {
      for (Coeff a1 = -Q_; a1 <= Q_; ++a1) {
        for (Coeff a0 = -Q_; a0 <= Q_; ++a0) {
          if (a0 == 0) {
            if (options_.compute_reducible) ++t.reducible;
            continue;
          }
          const Coeff ac[4] = {a0, a1, a2, a3};
          int rational = -1;  // lazily computed
          auto has_rational = [&] {
            if (rational < 0) rational = counting_detail::has_rational_root(ac) ? 1 : 0;
            return rational == 1;
          };
          if (options_.compute_reducible && has_rational()) ++t.reducible;
          if (!omega_) continue;
          const i128 a = a3, b = a2, c = a1, d = a0;
          const i128 disc = 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
          if (disc >= 0) continue;
          const double dc[4] = {static_cast<double>(a0), static_cast<double>(a1), static_cast<double>(a2),
                                static_cast<double>(a3)};
          std::complex<double> buf[3];
          roots_detail::solve_cubic_one_real(dc[0], dc[1], dc[2], dc[3], buf);
          if (!near_box(buf[1]) && !near_box(buf[2])) continue;
          std::array<CertifiedRoot, 2> pair;
          double rad = residual_radius(dc, buf[1]);
          if (rad <= options_.roots.target_radius && std::abs(buf[1].imag()) > rad) {
            pair[0] = {buf[1], rad, 3, false, Precision::kDouble};
            pair[1] = {buf[2], rad, 3, false, Precision::kDouble};
          } else {
            auto all = find_roots(std::span<const double>(dc, 4), options_.roots);
            std::sort(all.begin(), all.end(),
                      [](const CertifiedRoot& x, const CertifiedRoot& y) { return std::abs(x.value.imag()) > std::abs(y.value.imag()); });
            pair[0] = all[0];
            pair[1] = all[1];
          }
          int inside = 0, ambiguous = 0;
          for (const auto& root : pair) {
            Membership mem = classify_refined(root, dc);
            inside += mem == Membership::kInside;
            ambiguous += mem == Membership::kAmbiguous;
          }
          if (inside + ambiguous == 0) continue;
          if (content_of(ac) != 1 || has_rational()) continue;
          record(3, inside, ambiguous, t);
        }
      }
    }
  }

  void general(int m, Coeff lead, Tally& t) const {
    std::vector<Coeff> a(static_cast<std::size_t>(m) + 1, -Q_);
    a[static_cast<std::size_t>(m)] = lead;
    std::vector<double> dc(a.size());
    while (true) {
      int reducible = -1;
      auto is_reducible = [&] {
        if (reducible < 0) reducible = (a[0] == 0 || !irreducible_core(a)) ? 1 : 0;
        return reducible == 1;
      };
      if (options_.compute_reducible && is_reducible()) ++t.reducible;
      if (omega_ && a[0] != 0) {
        for (std::size_t i = 0; i < a.size(); ++i) dc[i] = static_cast<double>(a[i]);
        auto roots = find_roots(std::span<const double>(dc), options_.roots);
        int inside = 0, ambiguous = 0;
        for (const auto& root : roots) {
          if (!near_box(root.value) && std::isfinite(root.radius) && root.radius < pad_) continue;
          Membership mem = classify_refined(root, dc);
          inside += mem == Membership::kInside;
          ambiguous += mem == Membership::kAmbiguous;
        }
        if (inside + ambiguous > 0 && content_of(a) == 1 && !is_reducible()) record(m, inside, ambiguous, t);
      }
      std::size_t i = 0;
      while (i < static_cast<std::size_t>(m) && a[i] == Q_) a[i++] = -Q_;
      if (i == static_cast<std::size_t>(m)) break;
      ++a[i];
    }
  }

  int n_;
  Coeff Q_;
  const ComplexRegion* omega_;
  CountOptions options_;
  BoundingBox bbox_{};
  double pad_ = 0.0;
};

void check_parameters(int n, Coeff Q) {
  if (n < 2 || n > kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(kMaxDegree) + "]");
  if (Q < 1) throw std::domain_error("Q must be positive");
  if (Q > 1'000'000) throw std::domain_error("Q must not exceed 10^6");
}

Tally run_shard(int n, Coeff Q, const ComplexRegion* omega, Shard shard, const CountOptions& options) {
  std::vector<std::pair<int, Coeff>> items;
  std::size_t position = 0;
  for (int m = 2; m <= n; ++m)
    for (Coeff lead = 1; lead <= Q; ++lead, ++position)
      if (position % shard.total == shard.index) items.emplace_back(m, lead);

  // Larger degrees dominate the cost; scheduling them first balances workers.
  std::stable_sort(items.begin(), items.end(), [](auto& x, auto& y) { return x.first > y.first; });

  const unsigned threads = resolve_threads(options.threads);
  std::vector<Tally> per_worker(threads);
  Enumerator e(n, Q, omega, options);
  parallel_for(items.size(), threads, [&](std::size_t i, unsigned w) {
    e.run_item(items[i].first, items[i].second, per_worker[w]);
  });
  Tally total;
  for (const auto& t : per_worker) total.add(t);
  return total;
}

}  // namespace

namespace counting_detail {

bool has_root(std::span<const Coeff> a, Coeff s, Coeff q) {
  const int m = static_cast<int>(a.size()) - 1;
  if (s == 0) return a[0] == 0;
  const i128 bound = l1_norm(a) << m;
  const auto mm = static_cast<std::size_t>(m);
  if (a[mm] % q) return false;
  i128 b = a[mm] / q;
  for (int i = m - 1; i >= 1; --i) {
    i128 num = a[static_cast<std::size_t>(i)] + static_cast<i128>(s) * b;
    if (num % q) return false;
    b = num / q;
    if (abs128(b) > bound) return false;
  }
  return static_cast<i128>(a[0]) == -static_cast<i128>(s) * b;
}

bool has_rational_root(std::span<const Coeff> a) {
  const int m = static_cast<int>(a.size()) - 1;
  const Coeff lead = a[static_cast<std::size_t>(m)];
  Coeff h = 0;
  for (int i = 0; i < m; ++i) h = std::max(h, a[static_cast<std::size_t>(i)] < 0 ? -a[static_cast<std::size_t>(i)] : a[static_cast<std::size_t>(i)]);
  const double cauchy = 1.0 + static_cast<double>(h) / std::abs(static_cast<double>(lead));
  std::vector<Coeff> scratch_q, scratch_s;
  auto qs = divisors(lead, scratch_q);
  auto ss = divisors(a[0], scratch_s);
  for (Coeff q : qs) {
    for (Coeff s : ss) {
      if (static_cast<double>(s) > cauchy * static_cast<double>(q)) break;
      if (std::gcd(s, q) != 1) continue;
      if (has_root(a, s, q) || has_root(a, -s, q)) return true;
    }
  }
  return false;
}

bool divides(std::span<const Coeff> g, std::span<const Coeff> p) {
  const int d = static_cast<int>(g.size()) - 1;
  const int m = static_cast<int>(p.size()) - 1;
  if (d > m) return false;
  const i128 bound = l1_norm(p) << m;
  std::array<i128, 4 * kMaxDegree + 1> r{};
  for (int i = 0; i <= m; ++i) r[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
  const i128 gd = g[static_cast<std::size_t>(d)];
  for (int k = m - d; k >= 0; --k) {
    i128 top = r[static_cast<std::size_t>(k + d)];
    if (top % gd) return false;
    i128 h = top / gd;
    if (abs128(h) > bound) return false;
    for (int i = 0; i <= d; ++i) r[static_cast<std::size_t>(k + i)] -= h * g[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < d; ++i)
    if (r[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

}  // namespace counting_detail

bool is_irreducible_over_rationals(const IntPolynomial& p) {
  if (p.degree() < 1) throw std::domain_error("irreducibility is defined for degree >= 1");
  if (p.degree() > 4 * kMaxDegree) throw std::domain_error("degree too large for the factor search");
  if (p.degree() == 1) return true;
  if (p[0] == 0) return false;
  return irreducible_core(p.coeffs());
}

bool is_prime_polynomial(const IntPolynomial& p) {
  if (p.degree() < 1 || p.leading() <= 0) return false;
  return is_primitive(p) && is_irreducible_over_rationals(p);
}

PrimePolynomial::PrimePolynomial(IntPolynomial p) : inner_(std::move(p)) {
  if (!is_prime_polynomial(inner_)) throw std::invalid_argument("not a prime polynomial: " + to_text(inner_));
}

std::optional<PrimePolynomial> PrimePolynomial::make(const IntPolynomial& p) {
  if (!is_prime_polynomial(p)) return std::nullopt;
  return PrimePolynomial(p);
}

CountResult partitioned_enumerate(int n, Coeff Q, const ComplexRegion& omega, Shard shard,
                                  const CountOptions& options) {
  check_parameters(n, Q);
  if (shard.total == 0 || shard.index >= shard.total) throw std::domain_error("shard index must lie in [0, total)");
  auto start = std::chrono::steady_clock::now();
  Tally t = run_shard(n, Q, &omega, shard, options);

  CountResult r;
  r.n = n;
  r.Q = Q;
  r.region = omega.to_string();
  r.psi = t.psi;
  r.ambiguous = t.ambiguous;
  r.reducible = t.reducible;
  r.reducible_computed = options.compute_reducible;
  r.gamma.assign(t.gamma.begin() + 1, t.gamma.begin() + 1 + n);
  r.degree_breakdown.assign(t.by_degree.begin(), t.by_degree.begin() + n + 1);
  r.shards = {shard.index};
  r.shard_total = shard.total;
  r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CountResult enumerate_count(int n, Coeff Q, const ComplexRegion& omega, const CountOptions& options) {
  return partitioned_enumerate(n, Q, omega, Shard{0, 1}, options);
}

CountResult merge(std::span<const CountResult> parts) {
  if (parts.empty()) throw std::invalid_argument("merge: no shard results");
  CountResult out = parts[0];
  out.shards.clear();
  out.psi = out.ambiguous = out.reducible = 0;
  std::fill(out.gamma.begin(), out.gamma.end(), 0);
  std::fill(out.degree_breakdown.begin(), out.degree_breakdown.end(), 0);
  out.runtime_s = 0.0;
  for (const auto& p : parts) {
    if (p.n != out.n || p.Q != out.Q || p.region != out.region || p.shard_total != out.shard_total ||
        p.reducible_computed != out.reducible_computed)
      throw std::invalid_argument("merge: shard results describe different runs");
    for (auto idx : p.shards) {
      if (std::find(out.shards.begin(), out.shards.end(), idx) != out.shards.end())
        throw std::invalid_argument("merge: shard " + std::to_string(idx) + " appears twice");
      out.shards.push_back(idx);
    }
    out.psi += p.psi;
    out.ambiguous += p.ambiguous;
    out.reducible += p.reducible;
    for (std::size_t i = 0; i < out.gamma.size(); ++i) out.gamma[i] += p.gamma[i];
    for (std::size_t i = 0; i < out.degree_breakdown.size(); ++i) out.degree_breakdown[i] += p.degree_breakdown[i];
    out.runtime_s += p.runtime_s;
  }
  std::sort(out.shards.begin(), out.shards.end());
  return out;
}

std::uint64_t reducible_count(int n, Coeff Q, unsigned threads) {
  check_parameters(n, Q);
  CountOptions options;
  options.threads = threads;
  options.compute_reducible = true;
  return run_shard(n, Q, nullptr, Shard{0, 1}, options).reducible;
}

}  // namespace algdist
