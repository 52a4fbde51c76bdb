#include "algdist/verify.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "algdist/qmc.hpp"

namespace algdist {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument(std::string(what) + ": cannot parse '" + std::string(text) + "'");
  return value;
}

double parse_real(std::string_view text, std::string_view what) {
  std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument(std::string(what) + ": cannot parse '" + s + "'");
  return v;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

void VerifyConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "sigma") sigma = parse_real(value, key);
  else if (key == "max_fail_fraction") max_fail_fraction = parse_real(value, key);
  else if (key == "terminal_tolerance") terminal_tolerance = parse_real(value, key);
  else if (key == "budget") budget = parse_number<std::uint64_t>(value, key);
  else if (key == "samples") samples = parse_number<std::uint64_t>(value, key);
  else if (key == "seed") seed = parse_number<std::uint64_t>(value, key);
  else if (key == "threads") threads = parse_number<unsigned>(value, key);
  else if (key == "n") n = parse_number<int>(value, key);
  else if (key == "q") q = parse_number<Coeff>(value, key);
  else if (key == "q_list") {
    q_list.clear();
    for (auto part : split(value, ',')) q_list.push_back(parse_number<Coeff>(part, key));
  } else if (key == "region") region = std::string(value);
  else if (key == "grid") grid = std::string(value);
  else throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

VerifyConfig VerifyConfig::parse(std::string_view text) {
  VerifyConfig c;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    c.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return c;
}

VerifyConfig VerifyConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

GridSpec GridSpec::parse(std::string_view text) {
  auto axes = split(text, ',');
  if (axes.size() != 2) throw std::invalid_argument("grid: expected x0:x1:nx,y0:y1:ny");
  GridSpec g;
  auto axis = [](std::string_view a, double& lo, double& hi, int& count) {
    auto f = split(a, ':');
    if (f.size() != 3) throw std::invalid_argument("grid: expected lo:hi:count per axis");
    lo = parse_real(f[0], "grid");
    hi = parse_real(f[1], "grid");
    count = parse_number<int>(f[2], "grid");
    if (count < 1 || count > 100000) throw std::invalid_argument("grid: count must lie in [1, 100000]");
    if (!(lo <= hi)) throw std::invalid_argument("grid: lo must not exceed hi");
  };
  axis(axes[0], g.x0, g.x1, g.nx);
  axis(axes[1], g.y0, g.y1, g.ny);
  return g;
}

double GridSpec::x(int i) const { return nx == 1 ? x0 : x0 + (x1 - x0) * i / (nx - 1); }
double GridSpec::y(int j) const { return ny == 1 ? y0 : y0 + (y1 - y0) * j / (ny - 1); }

std::vector<std::complex<double>> GridSpec::points() const {
  std::vector<std::complex<double>> pts;
  pts.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) pts.emplace_back(x(i), y(j));
  return pts;
}

TrendFit fit_trend(std::span<const ConvergenceRow> rows) {
  TrendFit f;
  if (rows.size() < 2) return f;
  double mx = 0, my = 0;
  for (const auto& r : rows) {
    mx += 1.0 / static_cast<double>(r.Q);
    my += std::abs(r.ratio - 1.0);
  }
  mx /= static_cast<double>(rows.size());
  my /= static_cast<double>(rows.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : rows) {
    double dx = 1.0 / static_cast<double>(r.Q) - mx, dy = std::abs(r.ratio - 1.0) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) return f;
  f.fitted = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

ConvergenceReport convergence_sweep(int n, std::span<const Coeff> q_list, const ComplexRegion& omega,
                                    const VerifyConfig& config) {
  if (q_list.empty()) throw std::domain_error("convergence sweep needs at least one Q");
  for (std::size_t i = 1; i < q_list.size(); ++i)
    if (q_list[i] <= q_list[i - 1]) throw std::domain_error("Q list must be strictly increasing");

  ConvergenceReport rep;
  rep.integral = integrate_psi(omega, n, config.budget, config.seed);
  CountOptions options;
  options.threads = config.threads;
  bool any_ambiguous = false;
  for (Coeff Q : q_list) {
    CountResult c = enumerate_count(n, Q, omega, options);
    Prediction p = predicted_count(static_cast<double>(Q), n, rep.integral);
    ConvergenceRow row;
    row.n = n;
    row.Q = Q;
    row.region = omega.to_string();
    row.psi_exact = c.psi;
    row.predicted = p.value;
    row.predicted_std_error = p.std_error;
    row.ratio = static_cast<double>(c.psi) / p.value;
    row.scaled_residual = (static_cast<double>(c.psi) - p.value) / std::pow(static_cast<double>(Q), n);
    row.ambiguous = c.ambiguous;
    row.reducible = c.reducible;
    row.runtime_s = c.runtime_s;
    any_ambiguous = any_ambiguous || c.ambiguous > 0;
    rep.rows.push_back(row);
  }
  rep.fit = fit_trend(rep.rows);
  rep.deviation_decreasing = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (std::abs(rep.rows[i].ratio - 1.0) > std::abs(rep.rows[i - 1].ratio - 1.0)) rep.deviation_decreasing = false;
  rep.residual_bounded = true;
  if (rep.rows.size() >= 3) {
    bool growing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      if (std::abs(rep.rows[i].scaled_residual) <= std::abs(rep.rows[i - 1].scaled_residual)) growing = false;
    rep.residual_bounded = !growing;
  }
  const bool terminal_ok = std::abs(rep.rows.back().ratio - 1.0) <= config.terminal_tolerance;
  const bool trend_ok = rep.rows.size() < 2 || (rep.fit.fitted && rep.fit.slope >= 0.0);
  if (any_ambiguous) rep.verdict = Verdict::kInconclusive;
  else rep.verdict = terminal_ok && trend_ok && rep.residual_bounded ? Verdict::kPass : Verdict::kFail;
  return rep;
}

SymmetryReport symmetry_certificate(int n, Coeff Q, const ComplexRegion& omega, const VerifyConfig& config) {
  SymmetryReport rep;
  CountOptions options;
  options.threads = config.threads;
  options.compute_reducible = false;
  const std::array<ComplexRegion, 4> regions{omega, omega.conjugate(), omega.negate(), omega.invert()};
  bool ambiguous = false, equal = true;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    rep.counts[i] = enumerate_count(n, Q, regions[i], options);
    ambiguous = ambiguous || rep.counts[i].ambiguous > 0;
    equal = equal && rep.counts[i].psi == rep.counts[0].psi;
  }
  if (ambiguous) rep.verdict = Verdict::kInconclusive;
  else rep.verdict = equal ? Verdict::kPass : Verdict::kFail;
  return rep;
}

double agreement_score(const DensityEstimate& a, const DensityEstimate& b) {
  const double diff = std::abs(a.value - b.value);
  const double floor = 1e-12 * std::max(std::abs(a.value), std::abs(b.value));
  if (diff <= floor) return 0.0;
  const double se = std::hypot(a.std_error, b.std_error);
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  return diff / se;
}

AgreementReport density_agreement(int n, std::span<const std::complex<double>> grid, const VerifyConfig& config) {
  for (const auto& z : grid)
    if (z.imag() == 0.0) throw std::domain_error("density agreement grid contains a real point");
  AgreementReport rep;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto z = grid[i];
    const std::uint64_t seed = mix64(config.seed + i);
    AgreementPoint pt;
    pt.z = z;
    pt.values.push_back({"mc", psi_mc(z, n, config.samples, seed)});
    pt.values.push_back({"polar", psi_polar(z, n, config.samples, mix64(seed ^ 0x2545f4914f6cdd1dULL))});
    if (n == 2) pt.values.push_back({"closed-n2", psi_n2(z)});
    if (std::abs(z) <= kSmallZoneRadius) pt.values.push_back({"closed-small", psi_closed_small(z, n)});
    if (std::abs(z) >= kLargeZoneRadius) pt.values.push_back({"closed-large", psi_closed_large(z, n)});
    for (std::size_t a = 0; a < pt.values.size(); ++a)
      for (std::size_t b = a + 1; b < pt.values.size(); ++b)
        pt.worst_z_score = std::max(pt.worst_z_score, agreement_score(pt.values[a].estimate, pt.values[b].estimate));
    pt.agree = pt.worst_z_score <= config.sigma;

    DensityEstimate inv = psi_mc(1.0 / z, n, config.samples, mix64(seed ^ 0x5bd1e995ULL));
    const double scale = std::pow(std::norm(z), -2.0);
    inv.value *= scale;
    inv.std_error *= scale;
    pt.inversion_z_score = agreement_score(inv, pt.values[0].estimate);
    pt.inversion_agree = pt.inversion_z_score <= config.sigma;

    rep.failing_points += !pt.agree;
    rep.failing_inversion += !pt.inversion_agree;
    rep.points.push_back(std::move(pt));
  }
  const auto allowed = static_cast<std::size_t>(std::floor(config.max_fail_fraction * static_cast<double>(grid.size())));
  rep.verdict = rep.failing_points <= allowed ? Verdict::kPass : Verdict::kFail;
  rep.inversion_verdict = rep.failing_inversion <= allowed ? Verdict::kPass : Verdict::kFail;
  return rep;
}

}  // namespace algdist
