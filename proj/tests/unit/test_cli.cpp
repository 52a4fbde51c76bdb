#include <doctest.h>

#include <json.hpp>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "algdist/cli.hpp"

using namespace algdist;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "algdist");
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path temp_dir() {
  auto d = fs::temp_directory_path() / ("algdist_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

/// Drops the trailing runtime column of every data row.
std::string without_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("sha256 of a known message") {
    auto d = temp_dir();
    std::ofstream(d / "abc.txt", std::ios::binary) << "abc";
    CHECK(sha256_file((d / "abc.txt").string()) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK_THROWS(sha256_file((d / "missing").string()));
  }

  TEST_CASE("count prints the exact value") {
    auto r = run({"count", "--n", "2", "--q", "1", "--region", "disk:0,1,0.3"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("psi=1\n") != std::string::npos);
    CHECK(r.out.find("reducible=4") != std::string::npos);
  }

  TEST_CASE("count CSV and manifest are thread independent") {
    auto d = temp_dir();
    auto a = d / "a.csv", b = d / "b.csv";
    REQUIRE(run({"count", "--n", "3", "--q", "4", "--region", "rect:-1,1,0.2,1.5", "--threads", "1", "--csv", a.string()}).code == 0);
    REQUIRE(run({"count", "--n", "3", "--q", "4", "--region", "rect:-1,1,0.2,1.5", "--threads", "3", "--csv", b.string()}).code == 0);
    CHECK(without_runtime(slurp(a)) == without_runtime(slurp(b)));
    CHECK(slurp(a).rfind("n,Q,region,psi,ambiguous,reducible,gamma_1,gamma_2,gamma_3,runtime_s", 0) == 0);
    auto m = nlohmann::json::parse(slurp(a.string() + ".manifest.json"));
    CHECK(m["subcommand"] == "count");
    CHECK(m["outputs"][0]["sha256"] == sha256_file(a.string()));
    CHECK(m.contains("tool_version"));
    CHECK(m.contains("seed"));
  }

  TEST_CASE("density output") {
    auto r = run({"density", "--n", "2", "--z", "0.3,0.4"});
    CHECK(r.code == 0);
    CHECK(r.out == "psi=1.0666667 (closed-n2)\n");
    auto m = run({"density", "--n", "3", "--z", "1,1", "--method", "polar", "--samples", "4096"});
    CHECK(m.code == 0);
    CHECK(m.out.find("(polar)") != std::string::npos);
    CHECK(m.out.find("stderr=") != std::string::npos);
    CHECK(run({"density", "--n", "3", "--z", "1,0"}).code == kExitFailure);
  }

  TEST_CASE("field writes a PGM with a manifest") {
    auto d = temp_dir();
    auto ppm = d / "f.ppm";
    auto r = run({"field", "--n", "2", "--grid", "-1:1:5,0.2:1:4", "--out", ppm.string()});
    REQUIRE(r.code == 0);
    const std::string img = slurp(ppm);
    const std::string header = "P5\n5 4\n255\n";
    REQUIRE(img.size() == header.size() + 20);
    CHECK(img.substr(0, header.size()) == header);
    auto m = nlohmann::json::parse(slurp(ppm.string() + ".manifest.json"));
    CHECK(m["outputs"][0]["sha256"] == sha256_file(ppm.string()));
    auto csv = d / "f.csv";
    REQUIRE(run({"field", "--n", "2", "--grid", "-1:1:5,0.2:1:4", "--out", csv.string()}).code == 0);
    CHECK(slurp(csv).rfind("x,y,psi,stderr\n", 0) == 0);
    CHECK(run({"field", "--n", "2", "--grid", "-1:1:5,0.2:1:4", "--out", (d / "f.txt").string()}).code == kExitFailure);
  }

  TEST_CASE("predict, simulate and lattice run") {
    CHECK(run({"predict", "--n", "2", "--q", "100", "--region", "rect:0.1,0.4,0.35,0.75", "--samples", "65536"}).code == 0);
    CHECK(run({"simulate", "--n", "2", "--region", "disk:0,1,0.3", "--trials", "10000"}).code == 0);
    auto l = run({"lattice", "--shape", "box", "--d", "2", "--t", "10", "--brute"});
    CHECK(l.code == 0);
    CHECK_FALSE(l.out.empty());
  }

  TEST_CASE("verify exit codes") {
    CHECK(run({"verify", "--suite", "symmetry", "--n", "2", "--q", "5", "--region", "rect:0.1,0.6,0.2,0.9"}).code == kExitOk);
    CHECK(run({"verify", "--suite", "nonsense"}).code != kExitOk);
  }

  TEST_CASE("usage errors") {
    CHECK(run({"count", "--n", "2"}).code == kExitUsage);
    CHECK(run({"count", "--n", "2", "--q", "1", "--region", "disk:0,1,0.3", "--bogus"}).code == kExitUsage);
    CHECK(run({"count", "--n", "2", "--q", "1", "--region", "disk:0,0.1,0.3"}).code == kExitFailure);
    CHECK(run({"--help"}).code == kExitOk);
  }
}
