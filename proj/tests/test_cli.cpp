#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hmap/cli.hpp"
#include "hmap/io.hpp"

using namespace hmap;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result hmap_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("hmap_test_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void put(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::string c;
  std::istringstream ss(line);
  while (std::getline(ss, c, ',')) out.push_back(c);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("selftest runs the elliptic identity suite and exits 0") {
  const auto r = hmap_run({"selftest"});
  CHECK(r.code == cli::ok);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("sn2_plus_cn2") != std::string::npos);
}

TEST_CASE("example li-tam writes the CSV and report and exits 0") {
  Scratch s("litam");
  const auto r = hmap_run({"example", "li-tam", "--a", "1", "--grid", "201x201", "--out", s / "map.csv", "--report",
                           s / "report.json"});
  INFO(r.out << r.err);
  REQUIRE(r.code == cli::ok);

  const auto rows = lines(slurp(s / "map.csv"));
  REQUIRE(rows.size() == 1 + 201 * 201);
  CHECK(rows[0] == "xi,eta,R,S,omega,eF,res_harmonic,res_beltrami");
  // eta-major, xi fastest
  CHECK(cells(rows[1])[0] == "0");
  CHECK(cells(rows[2])[0] == "0.0050000000000000001");
  CHECK(cells(rows[1])[1] == cells(rows[201])[1]);
  CHECK(cells(rows[202])[0] == "0");
  // boundary residuals are masked: empty cells, not zeros
  const auto first = cells(rows[1]);
  REQUIRE(first.size() == 8);
  CHECK(first[6].empty());
  CHECK(first[7].empty());
  const auto interior = cells(rows[1 + 201 * 100 + 100]);
  CHECK_FALSE(interior[6].empty());
  // 17 significant digits round-trip
  const double R = std::stod(interior[2]);
  CHECK(io::format_double(R) == interior[2]);

  const auto rep = io::read_json(s / "report.json");
  CHECK(rep["command"] == "example li-tam");
  CHECK(rep["passed"] == true);
  for (const char* k : {"harmonic_max", "beltrami_max", "hopf_holomorphy_max", "hopf_std", "curvature_dev_max",
                        "jacobian_min", "orthogonality_max", "phi_harmonicity_max"})
    CHECK(rep.contains(k));
  CHECK(rep["nx"] == 201);
  CHECK(rep["parameters"]["a"] == 1);
  CHECK_FALSE(rep["parameters"].contains("out"));
}

TEST_CASE("outputs are byte-identical across runs") {
  Scratch s("determinism");
  for (int k = 0; k < 2; ++k) {
    const std::string n = std::to_string(k);
    REQUIRE(hmap_run({"soliton-map", "--out", s / ("m" + n + ".csv"), "--report", s / ("r" + n + ".json")})
                .code == cli::ok);
  }
  CHECK(slurp(s / "m0.csv") == slurp(s / "m1.csv"));
  CHECK(slurp(s / "r0.json") == slurp(s / "r1.json"));
}

TEST_CASE("JSON config: flags override the file, unknown keys are rejected") {
  Scratch s("config");
  put(s / "cfg.json", R"({"a": 3, "grid": "41x41", "form": "z", "eta0": 1.5})");
  auto r = hmap_run({"example", "li-tam", "--config", s / "cfg.json", "--a", "1", "--report", s / "r.json"});
  REQUIRE(r.code == cli::ok);
  auto rep = io::read_json(s / "r.json");
  CHECK(rep["parameters"]["a"] == 1);
  CHECK(rep["nx"] == 41);
  CHECK(rep["eta0"] == 1.5);

  put(s / "bad.json", R"({"a": 2, "bogus": 1})");
  r = hmap_run({"example", "li-tam", "--config", s / "bad.json"});
  CHECK(r.code == cli::usage_error);
  CHECK(r.err.find("bogus") != std::string::npos);

  put(s / "nested.json", R"({"a": [1, 2]})");
  CHECK(hmap_run({"example", "li-tam", "--config", s / "nested.json"}).code == cli::usage_error);
  put(s / "broken.json", R"({"a": )");
  CHECK(hmap_run({"example", "li-tam", "--config", s / "broken.json"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "--config", s / "cfg.json"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--config", s / "missing.json"}).code == cli::usage_error);

  put(s / "flag.json", R"({"verify-map": false, "grid": "401x831"})");
  r = hmap_run({"backlund", "--config", s / "flag.json", "--report", s / "b.json"});
  CHECK(r.code == cli::ok);
  CHECK(io::read_json(s / "b.json")["parameters"]["verify-map"] == false);
}

TEST_CASE("usage errors exit 2") {
  CHECK(hmap_run({}).code == cli::usage_error);
  CHECK(hmap_run({"nope"}).code == cli::usage_error);
  CHECK(hmap_run({"example"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--a", "nan"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--a", "inf"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--grid", "20by20"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--grid", "2x20"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "li-tam", "--form", "w"}).code == cli::usage_error);
  CHECK(hmap_run({"example", "wolf", "--t", "0.5"}).code == cli::usage_error);
  CHECK(hmap_run({"verify"}).code == cli::usage_error);
  CHECK(hmap_run({"selftest", "--out", "x.csv"}).code == cli::usage_error);
  CHECK(hmap_run({"--help"}).code == cli::ok);
}

TEST_CASE("domain and numeric errors exit 3") {
  // the zeta-form needs xi > 0
  CHECK(hmap_run({"example", "li-tam", "--form", "zeta", "--xi0", "-1", "--xi1", "0.5"}).code == cli::numeric_error);
  // the example map needs eta > cosh(2 xi)/2
  CHECK(hmap_run({"example", "backlund", "--grid", "11x11", "--eta0", "0.2", "--eta1", "1"}).code ==
        cli::numeric_error);
  // a grid straddling eta = cosh(2 xi)/2 has no real branch
  CHECK(hmap_run({"backlund", "--grid", "11x11", "--eta0", "0.2", "--eta1", "1"}).code == cli::numeric_error);
}

TEST_CASE("solve-beltrami with omega crossing zero exits 3 with a coefficient-singularity message") {
  Scratch s("zero");
  std::ostringstream csv;
  csv << "xi,eta,R,omega\n";
  const int n = 21;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = double(i) / (n - 1), y = double(j) / (n - 1);
      csv << io::format_double(x) << ',' << io::format_double(y) << ',' << io::format_double(x) << ','
          << io::format_double(x - 0.5) << '\n';
    }
  put(s / "omega.csv", csv.str());
  const auto r = hmap_run({"solve-beltrami", "--omega-csv", s / "omega.csv"});
  CHECK(r.code == cli::numeric_error);
  CHECK(r.err.find("singular") != std::string::npos);
}

TEST_CASE("solve-beltrami built-in case and CSV input agree") {
  Scratch s("solve");
  auto r = hmap_run({"solve-beltrami", "--grid", "65x65", "--out", s / "a.csv", "--report", s / "a.json"});
  INFO(r.out << r.err);
  REQUIRE(r.code == cli::ok);
  CHECK(io::read_json(s / "a.json")["diagnostics"]["converged"] == true);
  // feed the solution back: omega everywhere and R on the boundary
  r = hmap_run({"solve-beltrami", "--omega-csv", s / "a.csv", "--curvature", "-1", "--out", s / "b.csv"});
  INFO(r.out << r.err);
  CHECK(r.code == cli::ok);
  CHECK(slurp(s / "a.csv") == slurp(s / "b.csv"));
  CHECK(hmap_run({"solve-beltrami", "--omega-csv", s / "a.csv", "--grid", "9x9"}).code == cli::usage_error);
}

TEST_CASE("verify reproduces the report of the generating command") {
  Scratch s("verify");
  REQUIRE(hmap_run({"example", "li-tam", "--form", "zeta", "--grid", "51x51", "--out", s / "m.csv", "--report",
                    s / "a.json"})
              .code == cli::ok);
  const auto r = hmap_run({"verify", "--in", s / "m.csv", "--metric", "lower-half-plane", "--hopf-re", "1",
                           "--use-omega", "--out", s / "v.csv", "--report", s / "b.json"});
  REQUIRE(r.code == cli::ok);
  const auto a = io::read_json(s / "a.json"), b = io::read_json(s / "b.json");
  for (const char* k : {"harmonic_max", "beltrami_max", "hopf_std", "phi_harmonicity_max", "curvature_dev_max"})
    CHECK(a[k] == b[k]);
  CHECK(slurp(s / "m.csv") == slurp(s / "v.csv"));

  // a verification failure exits 1: the wrong target metric
  CHECK(hmap_run({"verify", "--in", s / "m.csv", "--metric", "flat"}).code == cli::verification_failed);
}

TEST_CASE("CSV reader rejects malformed grids") {
  auto read = [](const std::string& text) {
    std::istringstream is(text);
    return io::read_map_csv(is);
  };
  CHECK_THROWS_AS(read("x,eta,R\n"), io::FormatError);
  CHECK_THROWS_AS(read("xi,eta,Q\n0,0,1\n"), io::FormatError);
  CHECK_THROWS_AS(read("xi,eta,R\n"), io::FormatError);
  CHECK_THROWS_AS(read("xi,eta,R\n0,0,1\n1,0,1\n"), io::FormatError);  // one row
  CHECK_THROWS_AS(read("xi,eta,R\n0,0,1\n1,0,1\n0,1,1\n1,1,nan\n"), io::FormatError);
  CHECK_THROWS_AS(read("xi,eta,R\n0,0,1\n1,0\n"), io::FormatError);
  // non-uniform xi
  std::string nonuni = "xi,eta,R\n";
  for (double y : {0.0, 1.0, 2.0})
    for (double x : {0.0, 0.1, 1.0}) nonuni += io::format_double(x) + "," + io::format_double(y) + ",1\n";
  CHECK_THROWS_AS(read(nonuni), io::FormatError);

  std::string ok = "xi,eta,S,R\n";
  for (double y : {0.0, 0.5, 1.0})
    for (double x : {0.0, 1.0, 2.0}) ok += io::format_double(x) + "," + io::format_double(y) + ",," + "7\n";
  const auto t = read(ok);
  CHECK(t.geom.nx == 3);
  CHECK(t.geom.ny == 3);
  CHECK(t.geom.x1 == 2.0);
  CHECK_FALSE(t.S.has_value());
  REQUIRE(t.R.has_value());
  CHECK((*t.R)(2, 2) == 7.0);
}

TEST_CASE("the installed binary maps exit codes") {
  Scratch s("binary");
  const std::string bin = HMAP_CLI_PATH;
  auto sh = [&](const std::string& args) {
    const int st = std::system((bin + " " + args + " > " + (s / "log.txt") + " 2>&1").c_str());
    return WEXITSTATUS(st);
  };
  CHECK(sh("selftest") == 0);
  CHECK(sh("example li-tam --a 1 --grid 201x201 --out " + (s / "map.csv") + " --report " + (s / "report.json")) == 0);
  CHECK(fs::exists(s / "map.csv"));
  CHECK(sh("example wolf --t 1") == 2);
  CHECK(sh("example li-tam --form zeta --xi0 -1") == 3);
}
