#include "algdist/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "algdist/counting.hpp"
#include "algdist/density.hpp"
#include "algdist/lattice.hpp"
#include "algdist/parallel.hpp"
#include "algdist/qmc.hpp"
#include "algdist/simulate.hpp"
#include "algdist/verify.hpp"

#ifndef ALGDIST_VERSION
#define ALGDIST_VERSION "unknown"
#endif

namespace algdist {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string fmt_g(double v, int digits = 8) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",;\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::complex<double> parse_point(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--z expects x,y");
  std::size_t used_x = 0, used_y = 0;
  const std::string xs = text.substr(0, comma), ys = text.substr(comma + 1);
  double x = 0, y = 0;
  try {
    x = std::stod(xs, &used_x);
    y = std::stod(ys, &used_y);
  } catch (const std::exception&) {
    throw std::invalid_argument("--z expects two numbers x,y");
  }
  if (used_x != xs.size() || used_y != ys.size()) throw std::invalid_argument("--z expects two numbers x,y");
  return {x, y};
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

DensityChoice parse_method(const std::string& m) {
  if (m == "auto") return DensityChoice::kAuto;
  if (m == "mc") return DensityChoice::kMonteCarlo;
  if (m == "polar") return DensityChoice::kPolar;
  throw std::invalid_argument("--method must be auto, mc or polar");
}

/// Run record written next to every output file as `<file>.manifest.json`.
class Manifest {
 public:
  Manifest(std::string subcommand, std::span<const std::string> args)
      : subcommand_(std::move(subcommand)), args_(args.begin(), args.end()), start_(Clock::now()) {}

  void seed(std::uint64_t s) { seed_ = s; }
  json& parameters() { return parameters_; }
  void output(const std::string& path) { outputs_.push_back(path); }

  void write() const {
    const double wall = std::chrono::duration<double>(Clock::now() - start_).count();
    for (const auto& path : outputs_) {
      json m;
      m["subcommand"] = subcommand_;
      m["argv"] = args_;
      m["seed"] = seed_ ? json(*seed_) : json(nullptr);
      m["tool_version"] = ALGDIST_VERSION;
      m["wall_time_s"] = wall;
      m["parameters"] = parameters_;
      json outs = json::array();
      for (const auto& p : outputs_) outs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
      m["outputs"] = outs;
      std::ofstream f(path + ".manifest.json");
      if (!f) throw std::runtime_error("cannot write manifest for '" + path + "'");
      f << m.dump(2) << '\n';
    }
  }

 private:
  std::string subcommand_;
  std::vector<std::string> args_;
  Clock::time_point start_;
  std::optional<std::uint64_t> seed_;
  json parameters_ = json::object();
  std::vector<std::string> outputs_;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  return f;
}

// Per-subcommand settings, filled by CLI11.
struct CountArgs {
  int n = 2;
  Coeff q = 1;
  std::string region;
  std::uint32_t shards = 1;
  std::optional<std::uint32_t> shard;
  unsigned threads = 1;
  double root_tol = RootOptions{}.target_radius;
  bool skip_reducible = false;
  std::string csv;
};

struct DensityArgs {
  int n = 2;
  std::string z;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  std::string method = "auto";
};

struct FieldArgs {
  int n = 2;
  std::string grid;
  std::string out;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  std::string method = "auto";
  unsigned threads = 1;
};

struct PredictArgs {
  int n = 2;
  double q = 1;
  std::string region;
  std::uint64_t samples = 1 << 22;
  std::uint64_t seed = kDefaultSeed;
  std::string csv;
};

struct SimulateArgs {
  int n = 2;
  std::string region;
  std::uint64_t trials = 1000000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  double root_tol = RootOptions{}.target_radius;
  std::string csv;
};

struct LatticeArgs {
  std::string shape = "box";
  int d = 2;
  Coeff lo = 0, hi = 1;
  std::string t;
  std::string sweep;
  bool brute = false;
  std::string csv;
};

struct VerifyArgs {
  std::string suite = "all";
  std::string config;
  std::string csv;
  std::optional<int> n;
  std::optional<Coeff> q;
  std::optional<std::string> region, grid, q_list;
  std::optional<std::uint64_t> samples, seed, budget;
  std::optional<unsigned> threads;
};

const char* const kCountCsv = "n,Q,region,psi,ambiguous,reducible,gamma_1..gamma_n,runtime_s";
const char* const kFieldCsv = "x,y,psi,stderr";
const char* const kPredictCsv = "n,Q,region,integral,integral_stderr,predicted,predicted_stderr";
const char* const kSimulateCsv =
    "n,region,trials,seed,mean_N,std_error,scaled_mean,scaled_stderr,ambiguous_roots,freq_0..freq_n";
const char* const kLatticeCsv = "t,lambda_star,predicted,residual,scaled,scaled_log,ratio";
const char* const kVerifyCsv = "suite,item,metric,value,verdict";

int run_count(const CountArgs& a, std::span<const std::string> args, std::ostream& out) {
  const ComplexRegion omega = ComplexRegion::parse(a.region);
  if (a.shards < 1) throw std::domain_error("--shards must be positive");
  if (a.shard && *a.shard >= a.shards) throw std::domain_error("--shard must lie in [0, shards)");
  CountOptions opt;
  opt.threads = a.threads;
  opt.roots.target_radius = a.root_tol;
  opt.compute_reducible = !a.skip_reducible;

  CountResult r;
  if (a.shard) {
    r = partitioned_enumerate(a.n, a.q, omega, Shard{*a.shard, a.shards}, opt);
  } else if (a.shards > 1) {
    std::vector<CountResult> parts;
    for (std::uint32_t i = 0; i < a.shards; ++i) parts.push_back(partitioned_enumerate(a.n, a.q, omega, Shard{i, a.shards}, opt));
    r = merge(parts);
  } else {
    r = enumerate_count(a.n, a.q, omega, opt);
  }

  std::string header = "n,Q,region,psi,ambiguous,reducible";
  for (int k = 1; k <= a.n; ++k) header += ",gamma_" + std::to_string(k);
  header += ",runtime_s";
  std::string row = std::to_string(r.n) + "," + std::to_string(r.Q) + "," + csv_quote(r.region) + "," +
                    std::to_string(r.psi) + "," + std::to_string(r.ambiguous) + "," +
                    (r.reducible_computed ? std::to_string(r.reducible) : std::string());
  for (auto g : r.gamma) row += "," + std::to_string(g);
  row += "," + fmt_g(r.runtime_s, 6);

  out << "psi=" << r.psi << '\n';
  out << "ambiguous=" << r.ambiguous << '\n';
  if (r.reducible_computed) out << "reducible=" << r.reducible << '\n';
  if (a.shard) out << "shard=" << *a.shard << "/" << a.shards << '\n';
  if (a.csv.empty()) {
    out << header << '\n' << row << '\n';
  } else {
    Manifest m("count", args);
    {
      auto f = open_output(a.csv);
      f << header << '\n' << row << '\n';
    }
    m.parameters() = {{"n", a.n}, {"Q", a.q}, {"region", r.region}, {"shards", a.shards}, {"threads", a.threads},
                      {"root_tol", a.root_tol}};
    if (a.shard) m.parameters()["shard"] = *a.shard;
    m.output(a.csv);
    m.write();
  }
  return kExitOk;
}

int run_density(const DensityArgs& a, std::ostream& out) {
  const auto z = parse_point(a.z);
  const DensityEstimate e = psi(z, a.n, parse_method(a.method), a.samples, a.seed);
  out << "psi=" << fmt_g(e.value) << " (" << to_string(e.method) << ")";
  if (e.std_error > 0.0) out << " stderr=" << fmt_g(e.std_error, 3);
  out << '\n';
  return kExitOk;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int run_field(const FieldArgs& a, std::span<const std::string> args, std::ostream& out) {
  const GridSpec g = GridSpec::parse(a.grid);
  const DensityChoice choice = parse_method(a.method);
  const bool ppm = has_suffix(a.out, ".ppm") || has_suffix(a.out, ".pgm");
  if (!ppm && !has_suffix(a.out, ".csv")) throw std::invalid_argument("--out must end in .csv or .ppm");
  if (a.n < 2 || a.n > kMaxDegree) throw std::domain_error("n must lie in [2, " + std::to_string(kMaxDegree) + "]");

  const auto pts = g.points();
  std::vector<DensityEstimate> vals(pts.size());
  parallel_for(pts.size(), resolve_threads(a.threads), [&](std::size_t i, unsigned) {
    // The continuous extension of psi to the real axis is 0.
    if (pts[i].imag() == 0.0) vals[i] = {0.0, 0.0, DensityMethod::kClosedSmall, 0};
    else vals[i] = psi(pts[i], a.n, choice, a.samples, mix64(a.seed + i));
  });

  double vmax = 0.0;
  for (const auto& v : vals) vmax = std::max(vmax, v.value);

  Manifest m("field", args);
  m.seed(a.seed);
  m.parameters() = {{"n", a.n}, {"grid", a.grid}, {"samples", a.samples}, {"method", a.method}, {"threads", a.threads}};
  {
    auto f = open_output(a.out);
    if (ppm) {
      f << "P5\n" << g.nx << ' ' << g.ny << "\n255\n";
      // Rows run from the largest y down so the image is upright.
      for (int j = g.ny - 1; j >= 0; --j)
        for (int i = 0; i < g.nx; ++i) {
          const double v = vals[static_cast<std::size_t>(j) * static_cast<std::size_t>(g.nx) + static_cast<std::size_t>(i)].value;
          const double level = vmax > 0.0 ? std::round(255.0 * v / vmax) : 0.0;
          f.put(static_cast<char>(static_cast<unsigned char>(std::clamp(level, 0.0, 255.0))));
        }
      m.parameters()["ppm"] = {{"width", g.nx},
                               {"height", g.ny},
                               {"maxval", 255},
                               {"intensity", "gray = round(255 * psi / psi_max)"},
                               {"psi_max", vmax},
                               {"row_order", "first row is y1, last row is y0"}};
    } else {
      f << kFieldCsv << '\n';
      f << std::setprecision(10);
      for (std::size_t i = 0; i < pts.size(); ++i)
        f << pts[i].real() << ',' << pts[i].imag() << ',' << vals[i].value << ',' << vals[i].std_error << '\n';
    }
  }
  m.output(a.out);
  m.write();
  out << "points=" << pts.size() << '\n' << "psi_max=" << fmt_g(vmax) << '\n' << "wrote " << a.out << '\n';
  return kExitOk;
}

int run_predict(const PredictArgs& a, std::span<const std::string> args, std::ostream& out) {
  const ComplexRegion omega = ComplexRegion::parse(a.region);
  if (!(a.q > 0)) throw std::domain_error("Q must be positive");
  const Prediction p = predicted_count(a.q, a.n, omega, a.samples, a.seed);
  out << "integral=" << fmt_g(p.integral.value) << " stderr=" << fmt_g(p.integral.std_error, 3) << '\n';
  out << "predicted=" << fmt_g(p.value) << " stderr=" << fmt_g(p.std_error, 3) << '\n';
  if (!a.csv.empty()) {
    Manifest m("predict", args);
    m.seed(a.seed);
    m.parameters() = {{"n", a.n}, {"Q", a.q}, {"region", omega.to_string()}, {"samples", a.samples}};
    {
      auto f = open_output(a.csv);
      f << kPredictCsv << '\n' << std::setprecision(12);
      f << a.n << ',' << a.q << ',' << csv_quote(omega.to_string()) << ',' << p.integral.value << ','
        << p.integral.std_error << ',' << p.value << ',' << p.std_error << '\n';
    }
    m.output(a.csv);
    m.write();
  }
  return kExitOk;
}

int run_simulate(const SimulateArgs& a, std::span<const std::string> args, std::ostream& out) {
  const ComplexRegion omega = ComplexRegion::parse(a.region);
  RootOptions roots;
  roots.target_radius = a.root_tol;
  const RandomPolySummary s = estimate_EN(omega, a.n, a.trials, a.seed, a.threads, roots);
  const double scale = std::ldexp(1.0, a.n + 1);
  out << "mean_N=" << fmt_g(s.mean_N) << " stderr=" << fmt_g(s.std_error, 3) << '\n';
  out << "scaled_mean=" << fmt_g(scale * s.mean_N) << " stderr=" << fmt_g(scale * s.std_error, 3) << '\n';
  out << "ambiguous_roots=" << s.ambiguous_roots << '\n';
  for (std::size_t k = 0; k < s.per_k_count.size(); ++k) out << "count_" << k << "=" << s.per_k_count[k] << '\n';
  if (!a.csv.empty()) {
    Manifest m("simulate", args);
    m.seed(a.seed);
    m.parameters() = {{"n", a.n}, {"region", s.region}, {"trials", a.trials}, {"threads", a.threads},
                      {"block", kSimulationBlock}, {"root_tol", a.root_tol}};
    {
      auto f = open_output(a.csv);
      f << "n,region,trials,seed,mean_N,std_error,scaled_mean,scaled_stderr,ambiguous_roots";
      for (int k = 0; k <= a.n; ++k) f << ",freq_" << k;
      f << '\n' << std::setprecision(12);
      f << a.n << ',' << csv_quote(s.region) << ',' << s.trials << ',' << s.seed << ',' << s.mean_N << ','
        << s.std_error << ',' << scale * s.mean_N << ',' << scale * s.std_error << ',' << s.ambiguous_roots;
      for (double fr : s.per_k_frequency) f << ',' << fr;
      f << '\n';
    }
    m.output(a.csv);
    m.write();
  }
  return kExitOk;
}

LatticeRegion make_lattice_region(const LatticeArgs& a) {
  if (a.shape == "box") return LatticeRegion::box(a.d, a.lo, a.hi);
  if (a.shape == "ball") return LatticeRegion::ball(a.d);
  if (a.shape == "simplex") return LatticeRegion::simplex(a.d);
  throw std::invalid_argument("--shape must be box, ball or simplex");
}

int run_lattice(const LatticeArgs& a, std::span<const std::string> args, std::ostream& out) {
  const LatticeRegion A = make_lattice_region(a);
  if (a.t.empty() && a.sweep.empty()) throw std::invalid_argument("lattice needs --t or --sweep");
  if (!a.t.empty()) {
    const Rational t = parse_rational(a.t);
    out << "region=" << A.name() << '\n';
    out << "lambda=" << lambda_count(A, t) << '\n';
    out << "lambda_star=" << lambda_star_mobius(A, t) << '\n';
    if (a.brute) out << "lambda_star_brute=" << lambda_star_brute(A, t) << '\n';
    if (A.dimension() >= 2) {
      const std::vector<Rational> one{t};
      const auto row = asymptotic_report(A, one).front();
      out << "predicted=" << fmt_g(row.predicted) << '\n' << "ratio=" << fmt_g(row.ratio) << '\n';
    }
  }
  if (!a.sweep.empty()) {
    const auto ts = parse_rational_list(a.sweep);
    const auto rows = asymptotic_report(A, ts);
    std::ostringstream table;
    table << kLatticeCsv << '\n' << std::setprecision(12);
    for (const auto& r : rows)
      table << r.t << ',' << r.lambda_star << ',' << r.predicted << ',' << r.residual << ',' << r.scaled << ','
            << r.scaled_log << ',' << r.ratio << '\n';
    if (a.csv.empty()) {
      out << table.str();
    } else {
      Manifest m("lattice", args);
      m.parameters() = {{"region", A.name()}, {"sweep", a.sweep}};
      {
        auto f = open_output(a.csv);
        f << table.str();
      }
      m.output(a.csv);
      m.write();
      out << "wrote " << a.csv << '\n';
    }
  }
  return kExitOk;
}

struct ReportLine {
  std::string suite, item, metric, value;
  Verdict verdict;
};

int run_verify(const VerifyArgs& a, std::span<const std::string> args, std::ostream& out) {
  VerifyConfig cfg = a.config.empty() ? VerifyConfig{} : VerifyConfig::load(a.config);
  if (a.n) cfg.n = *a.n;
  if (a.q) cfg.q = *a.q;
  if (a.region) cfg.region = *a.region;
  if (a.grid) cfg.grid = *a.grid;
  if (a.q_list) cfg.set("q_list", *a.q_list);
  if (a.samples) cfg.samples = *a.samples;
  if (a.seed) cfg.seed = *a.seed;
  if (a.budget) cfg.budget = *a.budget;
  if (a.threads) cfg.threads = *a.threads;

  const bool all = a.suite == "all";
  if (!all && a.suite != "convergence" && a.suite != "symmetry" && a.suite != "density")
    throw std::invalid_argument("--suite must be convergence, symmetry, density or all");

  std::vector<ReportLine> lines;
  bool all_pass = true;
  auto record = [&](const std::string& suite, Verdict v) {
    all_pass = all_pass && v == Verdict::kPass;
    out << suite << ": " << to_string(v) << '\n';
  };

  if (all || a.suite == "symmetry") {
    const ComplexRegion omega = ComplexRegion::parse(cfg.region);
    const SymmetryReport rep = symmetry_certificate(cfg.n, cfg.q, omega, cfg);
    for (std::size_t i = 0; i < rep.counts.size(); ++i) {
      out << "  " << rep.labels[i] << " psi=" << rep.counts[i].psi << " ambiguous=" << rep.counts[i].ambiguous << '\n';
      lines.push_back({"symmetry", rep.labels[i], "psi", std::to_string(rep.counts[i].psi), rep.verdict});
      lines.push_back({"symmetry", rep.labels[i], "ambiguous", std::to_string(rep.counts[i].ambiguous), rep.verdict});
    }
    record("symmetry", rep.verdict);
  }
  if (all || a.suite == "convergence") {
    const ComplexRegion omega = ComplexRegion::parse(cfg.region);
    const ConvergenceReport rep = convergence_sweep(cfg.n, cfg.q_list, omega, cfg);
    out << "  integral=" << fmt_g(rep.integral.value) << " stderr=" << fmt_g(rep.integral.std_error, 3) << '\n';
    for (const auto& r : rep.rows) {
      out << "  Q=" << r.Q << " psi=" << r.psi_exact << " predicted=" << fmt_g(r.predicted) << " ratio=" << fmt_g(r.ratio, 6)
          << " scaled_residual=" << fmt_g(r.scaled_residual, 4) << '\n';
      const std::string item = "Q=" + std::to_string(r.Q);
      lines.push_back({"convergence", item, "psi", std::to_string(r.psi_exact), rep.verdict});
      lines.push_back({"convergence", item, "predicted", fmt_g(r.predicted, 10), rep.verdict});
      lines.push_back({"convergence", item, "ratio", fmt_g(r.ratio, 10), rep.verdict});
      lines.push_back({"convergence", item, "scaled_residual", fmt_g(r.scaled_residual, 10), rep.verdict});
    }
    out << "  slope=" << fmt_g(rep.fit.slope, 4) << " r_squared=" << fmt_g(rep.fit.r_squared, 4) << '\n';
    lines.push_back({"convergence", "trend", "slope", fmt_g(rep.fit.slope, 10), rep.verdict});
    lines.push_back({"convergence", "trend", "r_squared", fmt_g(rep.fit.r_squared, 10), rep.verdict});
    record("convergence", rep.verdict);
  }
  if (all || a.suite == "density") {
    const auto pts = GridSpec::parse(cfg.grid).points();
    const AgreementReport rep = density_agreement(cfg.n, pts, cfg);
    for (const auto& p : rep.points) {
      std::ostringstream item;
      item << fmt_g(p.z.real(), 6) << "+" << fmt_g(p.z.imag(), 6) << "i";
      lines.push_back({"density", item.str(), "worst_z", fmt_g(p.worst_z_score, 6),
                       p.agree ? Verdict::kPass : Verdict::kFail});
      lines.push_back({"density", item.str(), "inversion_z", fmt_g(p.inversion_z_score, 6),
                       p.inversion_agree ? Verdict::kPass : Verdict::kFail});
    }
    out << "  points=" << rep.points.size() << " failing=" << rep.failing_points
        << " failing_inversion=" << rep.failing_inversion << '\n';
    record("density", rep.verdict);
    record("inversion", rep.inversion_verdict);
  }

  if (!a.csv.empty()) {
    Manifest m("verify", args);
    m.seed(cfg.seed);
    m.parameters() = {{"suite", a.suite}, {"n", cfg.n}, {"q", cfg.q}, {"q_list", cfg.q_list}, {"region", cfg.region},
                      {"grid", cfg.grid}, {"sigma", cfg.sigma}, {"max_fail_fraction", cfg.max_fail_fraction},
                      {"terminal_tolerance", cfg.terminal_tolerance}, {"samples", cfg.samples}, {"budget", cfg.budget}};
    {
      auto f = open_output(a.csv);
      f << kVerifyCsv << '\n';
      for (const auto& l : lines)
        f << l.suite << ',' << csv_quote(l.item) << ',' << l.metric << ',' << l.value << ',' << to_string(l.verdict) << '\n';
    }
    m.output(a.csv);
    m.write();
  }
  return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counting and density of complex algebraic numbers", "algdist"};
  app.set_version_flag("--version", ALGDIST_VERSION);
  app.require_subcommand(1);

  CountArgs count;
  auto* c = app.add_subcommand("count", "Exact count of algebraic numbers of degree <= n, height <= Q in a region");
  c->add_option("--n", count.n, "Maximal degree (2..8)")->required();
  c->add_option("--q", count.q, "Height bound Q")->required();
  c->add_option("--region", count.region, "Region DSL, e.g. \"disk:0,1,0.3\" or \"rect:x0,x1,y0,y1;...\"")->required();
  c->add_option("--shards", count.shards, "Number of deterministic shards");
  c->add_option("--shard", count.shard, "Run only this shard index");
  c->add_option("--threads", count.threads, "Worker threads (0 = hardware)");
  c->add_option("--root-tol", count.root_tol, "Target certified root radius");
  c->add_flag("--skip-reducible", count.skip_reducible, "Do not count reducible polynomials");
  c->add_option("--csv", count.csv, "Write the CSV row to this file");
  c->footer(std::string("CSV columns: ") + kCountCsv);

  DensityArgs density;
  auto* d = app.add_subcommand("density", "Limit density psi(z)");
  d->add_option("--n", density.n, "Maximal degree (2..8)")->required();
  d->add_option("--z", density.z, "Point x,y")->required();
  d->add_option("--samples", density.samples, "Sample budget for Monte Carlo evaluators");
  d->add_option("--seed", density.seed, "Random seed");
  d->add_option("--method", density.method, "auto, mc or polar");

  FieldArgs field;
  auto* fcmd = app.add_subcommand("field", "psi on a grid, written as CSV or binary PGM (P5)");
  fcmd->add_option("--n", field.n, "Maximal degree (2..8)")->required();
  fcmd->add_option("--grid", field.grid, "x0:x1:nx,y0:y1:ny")->required();
  fcmd->add_option("--out", field.out, "Output file ending in .csv or .ppm")->required();
  fcmd->add_option("--samples", field.samples, "Sample budget per point");
  fcmd->add_option("--seed", field.seed, "Random seed");
  fcmd->add_option("--method", field.method, "auto, mc or polar");
  fcmd->add_option("--threads", field.threads, "Worker threads (0 = hardware)");
  fcmd->footer(std::string("CSV columns: ") + kFieldCsv +
               ". PPM: P5, width nx, height ny, maxval 255, gray = round(255 psi / psi_max), first row at y1.");

  PredictArgs predict;
  auto* p = app.add_subcommand("predict", "Asymptotic prediction Q^{n+1}/(2 zeta(n+1)) times the integral of psi");
  p->add_option("--n", predict.n, "Maximal degree (2..8)")->required();
  p->add_option("--q", predict.q, "Height bound Q")->required();
  p->add_option("--region", predict.region, "Region DSL")->required();
  p->add_option("--samples", predict.samples, "Integration budget");
  p->add_option("--seed", predict.seed, "Random seed");
  p->add_option("--csv", predict.csv, "Write a CSV row to this file");
  p->footer(std::string("CSV columns: ") + kPredictCsv);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Mean root count in a region for random polynomials with uniform coefficients");
  s->add_option("--n", sim.n, "Degree")->required();
  s->add_option("--region", sim.region, "Region DSL")->required();
  s->add_option("--trials", sim.trials, "Number of random polynomials");
  s->add_option("--seed", sim.seed, "Random seed");
  s->add_option("--threads", sim.threads, "Worker threads (0 = hardware)");
  s->add_option("--root-tol", sim.root_tol, "Target certified root radius");
  s->add_option("--csv", sim.csv, "Write a CSV row to this file");
  s->footer(std::string("CSV columns: ") + kSimulateCsv);

  LatticeArgs lat;
  auto* l = app.add_subcommand("lattice", "Primitive lattice point counts by Moebius inversion");
  l->add_option("--shape", lat.shape, "box, ball or simplex");
  l->add_option("--d", lat.d, "Dimension")->required();
  l->add_option("--lo", lat.lo, "Box lower corner coordinate");
  l->add_option("--hi", lat.hi, "Box upper corner coordinate");
  l->add_option("--t", lat.t, "Dilation factor (rational)");
  l->add_option("--sweep", lat.sweep, "Comma-separated dilation factors");
  l->add_flag("--brute", lat.brute, "Also count by direct gcd enumeration");
  l->add_option("--csv", lat.csv, "Write the sweep table to this file");
  l->footer(std::string("CSV columns: ") + kLatticeCsv);

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Certificates: convergence, symmetry, density agreement");
  v->add_option("--suite", ver.suite, "convergence, symmetry, density or all");
  v->add_option("--config", ver.config, "key = value file (keys: sigma, max_fail_fraction, terminal_tolerance, budget, "
                                        "samples, seed, threads, n, q, q_list, region, grid)");
  v->add_option("--csv", ver.csv, "Write the report to this file");
  v->add_option("--n", ver.n, "Maximal degree");
  v->add_option("--q", ver.q, "Height bound for the symmetry suite");
  v->add_option("--q-list", ver.q_list, "Comma-separated heights for the convergence suite");
  v->add_option("--region", ver.region, "Region DSL");
  v->add_option("--grid", ver.grid, "Density grid x0:x1:nx,y0:y1:ny");
  v->add_option("--samples", ver.samples, "Sample budget per density estimate");
  v->add_option("--budget", ver.budget, "Integration budget for region integrals");
  v->add_option("--seed", ver.seed, "Random seed");
  v->add_option("--threads", ver.threads, "Worker threads (0 = hardware)");
  v->footer(std::string("CSV columns: ") + kVerifyCsv);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << ALGDIST_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (c->parsed()) return run_count(count, args, out);
    if (d->parsed()) return run_density(density, out);
    if (fcmd->parsed()) return run_field(field, args, out);
    if (p->parsed()) return run_predict(predict, args, out);
    if (s->parsed()) return run_simulate(sim, args, out);
    if (l->parsed()) return run_lattice(lat, args, out);
    if (v->parsed()) return run_verify(ver, args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace algdist
