#include "hmap/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>

#include "hmap/backlund.hpp"
#include "hmap/beltrami.hpp"
#include "hmap/catalog.hpp"
#include "hmap/elliptic.hpp"
#include "hmap/fd.hpp"
#include "hmap/io.hpp"
#include "hmap/mapgen.hpp"
#include "hmap/soliton.hpp"
#include "hmap/verify.hpp"

namespace hmap::cli {

namespace {

using io::Json;
using verify::cplx;

/// Bad flags or configuration detected outside CLI11's own parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const CLI::Validator finite_number(
    [](std::string& s) -> std::string {
      try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size() && std::isfinite(v)) return {};
      } catch (const std::exception&) {
      }
      return "not a finite number: " + s;
    },
    "FINITE");

CLI::Option* num(CLI::App* a, const std::string& name, double& v, const std::string& desc) {
  return a->add_option("--" + name, v, desc)->check(finite_number)->capture_default_str();
}

CLI::Option* num(CLI::App* a, const std::string& name, std::optional<double>& v, const std::string& desc) {
  return a->add_option("--" + name, v, desc)->check(finite_number);
}

// ------------------------------------------------------------ shared options

struct GridDefaults {
  std::string size;
  double xi0, xi1, eta0, eta1;
};

struct GridOpts {
  std::string size;
  std::optional<double> xi0, xi1, eta0, eta1;

  void add(CLI::App* a, const GridDefaults& d) {
    a->add_option("--grid", size, "nodes as NXxNY (default " + d.size + ")");
    num(a, "xi0", xi0, "lower xi (default " + io::format_double(d.xi0) + ")");
    num(a, "xi1", xi1, "upper xi (default " + io::format_double(d.xi1) + ")");
    num(a, "eta0", eta0, "lower eta (default " + io::format_double(d.eta0) + ")");
    num(a, "eta1", eta1, "upper eta (default " + io::format_double(d.eta1) + ")");
  }

  bool any() const { return !size.empty() || xi0 || xi1 || eta0 || eta1; }

  GridGeometry resolve(const GridDefaults& d) const {
    const auto [nx, ny] = parse_grid_size(size.empty() ? d.size : size);
    return GridGeometry::make(nx, ny, xi0.value_or(d.xi0), xi1.value_or(d.xi1), eta0.value_or(d.eta0),
                              eta1.value_or(d.eta1));
  }
};

struct Outputs {
  std::string csv, report, config;

  void add(CLI::App* a) {
    a->add_option("--config", config, "JSON object of option values; flags override it");
    a->add_option("--out", csv, "map grid CSV");
    a->add_option("--report", report, "verification report JSON");
  }
};

void add_tolerances(CLI::App* a, verify::Tolerances& t) {
  const std::string grid_default = " (0: max(1e-8, 10 h^2))";
  num(a, "tol-harmonic", t.harmonic, "harmonic residual" + grid_default);
  num(a, "tol-beltrami", t.beltrami, "Beltrami residual" + grid_default);
  num(a, "tol-hopf", t.hopf, "Hopf holomorphy" + grid_default);
  num(a, "tol-hopf-std", t.hopf_std, "spread of a claimed constant Hopf differential");
  num(a, "tol-curvature", t.curvature, "curvature deviation");
  num(a, "tol-orthogonality", t.orthogonality, "orthogonality cosine" + grid_default);
  num(a, "tol-phi", t.phi, "phi harmonicity" + grid_default);
}

// ------------------------------------------------------------ config files

// Locates the leaf subcommand named by the leading non-option tokens.
CLI::App* leaf_for(CLI::App& app, const std::vector<std::string>& args, std::size_t& n) {
  CLI::App* cur = &app;
  n = 0;
  while (n < args.size() && !args[n].empty() && args[n][0] != '-') {
    CLI::App* s = cur->get_subcommand_no_throw(args[n]);
    if (!s) break;
    cur = s;
    ++n;
  }
  return cur;
}

// Splices "--key=value" tokens from the JSON config in after the subcommand
// path, so that later command-line occurrences win (options take the last value).
std::vector<std::string> expand_config(std::vector<std::string> args, CLI::App& app) {
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size();) {
    std::optional<std::string> p;
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file name");
      p = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k), args.begin() + static_cast<std::ptrdiff_t>(k) + 2);
    } else if (args[k].rfind("--config=", 0) == 0) {
      p = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
      ++k;
      continue;
    }
    if (path) throw UsageError("--config given more than once");
    path = p;
  }
  if (!path) return args;

  std::size_t n = 0;
  CLI::App* leaf = leaf_for(app, args, n);
  if (leaf == &app || !leaf->get_subcommands([](CLI::App*) { return true; }).empty())
    throw UsageError("--config needs a complete subcommand, e.g. 'example li-tam --config FILE'");
  const Json cfg = io::read_json(*path);
  if (!cfg.is_object()) throw UsageError("config: " + *path + " must hold a JSON object");

  std::vector<std::string> tokens;
  for (const auto& [key, val] : cfg.items()) {
    if (key == "config" || key == "help" || !leaf->get_option_no_throw("--" + key))
      throw UsageError("config: unknown key '" + key + "' for '" + leaf->get_name() + "'");
    std::string v;
    if (val.is_boolean())
      v = val.get<bool>() ? "true" : "false";
    else if (val.is_number_integer())
      v = val.dump();
    else if (val.is_number())
      v = io::format_double(val.get<double>());
    else if (val.is_string())
      v = val.get<std::string>();
    else
      throw UsageError("config: value of '" + key + "' must be a number, string or boolean");
    tokens.push_back("--" + key + "=" + v);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(n), tokens.begin(), tokens.end());
  return args;
}

// ------------------------------------------------------------ reporting

Json scalar(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  try {
    std::size_t used = 0;
    const long long i = std::stoll(s, &used);
    if (used == s.size()) return i;
    const double d = std::stod(s, &used);
    if (used == s.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  return s;
}

// Resolved option values of a leaf, output paths excluded so that reports do
// not depend on where they are written.
Json parameters(const CLI::App* leaf) {
  Json p = Json::object();
  for (const CLI::Option* o : leaf->get_options()) {
    const std::string& name = o->get_single_name();
    if (name == "help" || name == "config" || name == "out" || name == "report") continue;
    if (o->get_type_size() == 0) {
      p[name] = o->count() > 0 && o->as<bool>();
      continue;
    }
    const std::string s = o->count() > 0 ? o->results().back() : o->get_default_str();
    p[name] = s.empty() ? Json(nullptr) : scalar(s);
  }
  return p;
}

struct Analysis {
  verify::VerificationReport report;
  io::MapTable table;
};

// verify_map plus the per-node columns of the CSV.
Analysis analyze(const ComplexGrid& u, const verify::MetricSpec& metric, const verify::Expectations& ex,
                 const verify::Tolerances& tol) {
  Analysis a{verify::verify_map(u, metric, ex, tol), io::MapTable{u.geom}};
  a.table.R = real_part(u);
  a.table.S = imag_part(u);
  const RealGrid omega = ex.omega ? *ex.omega : verify::beltrami_decompose(u).omega;
  a.table.omega = omega;
  a.table.eF = verify::metric_along(metric, u, fd::wirtinger(u)).eF;
  const ComplexGrid h = verify::harmonic_residual_field(u, metric);
  RealGrid habs(u.geom);
  habs.values = h.values.abs();
  habs.mask = h.mask;
  a.table.res_harmonic = std::move(habs);
  a.table.res_beltrami = verify::beltrami_residual_specific_field(u, omega, a.report.lambda);
  return a;
}

verify::Check below(const std::string& name, double value, double tol) {
  return {name, value, tol, std::isfinite(value) && value <= tol};
}

struct Run {
  std::ostream& out;
  std::ostream& err;
  bool computing = false;  ///< ParameterError maps to exit 2 before, 3 after
};

void print_summary(std::ostream& os, const std::string& command, const Json& doc) {
  os << command;
  if (doc["nx"].is_number()) {
    os << ": " << doc["nx"].get<int>() << "x" << doc["ny"].get<int>() << " on [" << doc["xi0"].get<double>() << ", "
       << doc["xi1"].get<double>() << "] x [" << doc["eta0"].get<double>() << ", " << doc["eta1"].get<double>()
       << "]";
  }
  if (doc["metric"].is_string()) os << ", metric " << doc["metric"].get<std::string>();
  os << '\n';
  int failed = 0;
  char line[160];
  for (const auto& c : doc["checks"]) {
    const bool pass = c["pass"].get<bool>();
    failed += !pass;
    const double v = c["value"].is_number() ? c["value"].get<double>() : std::nan("");
    const double t = c["tolerance"].is_number() ? c["tolerance"].get<double>() : std::nan("");
    std::snprintf(line, sizeof line, "  %-22s %11.3e  tol %9.2e  %s\n", c["name"].get<std::string>().c_str(), v, t,
                  pass ? "ok" : "FAIL");
    os << line;
  }
  if (failed)
    os << "FAIL: " << failed << " check" << (failed > 1 ? "s" : "") << " above tolerance\n";
  else
    os << "PASS\n";
}

// Assembles the report document, writes the outputs and returns the exit code.
int finish(Run& run, const std::string& command, const CLI::App* leaf, Json report,
           const std::vector<verify::Check>& extra, const Json& diagnostics, const io::MapTable* table,
           const Outputs& outputs) {
  Json doc;
  doc["command"] = command;
  doc["parameters"] = parameters(leaf);
  for (const auto& [k, v] : report.items()) doc[k] = v;
  for (const auto& c : extra) {
    doc["tolerances"][c.name] = io::number(c.tolerance);
    doc["checks"].push_back(Json{{"name", c.name},
                                 {"value", io::number(c.value)},
                                 {"tolerance", io::number(c.tolerance)},
                                 {"pass", c.pass}});
  }
  bool passed = true;
  for (const auto& c : doc["checks"]) passed = passed && c["pass"].get<bool>();
  doc["passed"] = passed;
  doc["diagnostics"] = diagnostics.is_null() ? Json::object() : diagnostics;

  if (!outputs.csv.empty()) {
    if (!table) throw UsageError(command + " produces no map grid; drop --out");
    io::write_map_csv(outputs.csv, *table);
  }
  if (!outputs.report.empty()) io::write_json(outputs.report, doc);
  print_summary(run.out, command, doc);
  return passed ? ok : verification_failed;
}

int finish_analysis(Run& run, const std::string& command, const CLI::App* leaf, const Analysis& a,
                    const std::vector<verify::Check>& extra, const Json& diagnostics, const Outputs& outputs) {
  return finish(run, command, leaf, io::report_json(a.report), extra, diagnostics, &a.table, outputs);
}

// ------------------------------------------------------------ selftest

// Uniform double in [lo, hi) from the top 53 bits, independent of the
// standard library's distribution implementations.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

std::vector<verify::Check> elliptic_suite(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  double pyth = 0, dn_id = 0, m0 = 0, m1 = 0, cdK = 0, pi0 = 0;
  for (int k = 0; k < samples; ++k) {
    const double u = uniform(rng, -20.0, 20.0), m = uniform(rng, 0.0, 1.0);
    const auto e = elliptic::jacobi_sn_cn_dn(u, m);
    pyth = std::max(pyth, std::abs(e.sn * e.sn + e.cn * e.cn - 1));
    dn_id = std::max(dn_id, std::abs(e.dn * e.dn + m * e.sn * e.sn - 1));
    m0 = std::max(m0, std::abs(elliptic::jacobi_sn_cn_dn(u, 0.0).sn - std::sin(u)));
    m1 = std::max(m1, std::abs(elliptic::jacobi_sn_cn_dn(u, 1.0).sn - std::tanh(u)));
    const auto cd = elliptic::jacobi_pq('c', 'd', elliptic::complete_K(m), m);
    cdK = std::max(cdK, cd.ok() ? std::abs(cd.value) : std::numeric_limits<double>::infinity());
    pi0 = std::max(pi0, std::abs(elliptic::ellint_Pi(0.0, u, m) - u));
  }
  return {below("sn2_plus_cn2", pyth, 1e-12), below("dn2_plus_m_sn2", dn_id, 1e-12),
          below("sn_at_m0_is_sin", m0, 1e-12), below("sn_at_m1_is_tanh", m1, 1e-12),
          below("cd_at_K_is_zero", cdK, 1e-12), below("Pi_at_n0_is_u", pi0, 1e-12)};
}

}  // namespace

int run(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  Run run{out, err};
  CLI::App app{"Harmonic maps between surfaces from elliptic sinh-Gordon solutions", "hmap"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::function<int()> action;
  auto leaf = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    return parent->add_subcommand(name, desc);
  };
  // ---- soliton-map
  CLI::App* sm = leaf(&app, "soliton-map", "closed-form map of a one-soliton omega");
  struct {
    int kn = 1, eps = 0;
    double rho = 1, tau = 0.5, Y0 = 0, omega0 = 0.4, domega0 = 0.6, alpha = 1, X0 = 0, R0 = 0, S0 = 0;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } smo;
  const GridDefaults sm_grid{"201x201", 0.0, 0.2, 0.5, 0.7};
  sm->add_option("--kn", smo.kn, "target curvature K_N")->check(CLI::IsMember({-1, 0, 1}))->capture_default_str();
  num(sm, "rho", smo.rho, "rotation modulus");
  num(sm, "tau", smo.tau, "rotation angle (radians)");
  num(sm, "Y0", smo.Y0, "reference ordinate");
  num(sm, "omega0", smo.omega0, "omega(Y0)");
  num(sm, "domega0", smo.domega0, "omega'(Y0)");
  sm->add_option("--eps", smo.eps, "branch sign; 0 takes sign(domega0)")
      ->check(CLI::IsMember({-1, 0, 1}))
      ->capture_default_str();
  num(sm, "alpha", smo.alpha, "R_X");
  num(sm, "X0", smo.X0, "X offset");
  num(sm, "R0", smo.R0, "R at X0");
  num(sm, "S0", smo.S0, "S at Y0");
  smo.grid.add(sm, sm_grid);
  add_tolerances(sm, smo.tol);
  smo.o.add(sm);
  sm->callback([&] {
    action = [&] {
      const auto sp = soliton::SolitonParams::make(smo.kn, smo.rho, smo.tau, smo.Y0, smo.omega0, smo.domega0, smo.eps);
      const auto mp = mapgen::MapParams::make(sp, smo.alpha, smo.X0, smo.R0, smo.S0);
      const auto g = smo.grid.resolve(sm_grid);
      run.computing = true;
      const auto mg = mapgen::sample_map(mp, g);
      verify::Expectations ex;
      ex.hopf_constant = 1.0;
      ex.omega = mg.omega;
      Analysis a = analyze(mg.u, catalog::soliton_metric(mp), ex, smo.tol);
      a.table.eF = mg.eF;
      const Json diag{{"branch", soliton::to_string(sp.branch)}, {"C", io::number(sp.C)}, {"m", io::number(sp.m)},
                      {"M", io::number(sp.M)}, {"ell", io::number(sp.ell)}};
      return finish_analysis(run, "soliton-map", sm, a, {}, diag, smo.o);
    };
  });

  // ---- verify
  CLI::App* vf = leaf(&app, "verify", "verify a map read from CSV");
  struct {
    std::string in, metric = "upper-half-plane";
    double t = 1;
    std::optional<double> hopf_re, hopf_im, curvature;
    bool use_omega = false;
    verify::Tolerances tol;
    Outputs o;
  } vfo;
  vf->add_option("--in", vfo.in, "map CSV with at least xi,eta,R,S")->required()->check(CLI::ExistingFile);
  vf->add_option("--metric", vfo.metric, "target metric")
      ->check(CLI::IsMember({"flat", "upper-half-plane", "lower-half-plane", "sphere", "cylinder", "strip"}))
      ->capture_default_str();
  num(vf, "t", vfo.t, "cylinder width parameter");
  num(vf, "hopf-re", vfo.hopf_re, "claimed constant Hopf differential, real part");
  num(vf, "hopf-im", vfo.hopf_im, "claimed constant Hopf differential, imaginary part");
  num(vf, "curvature", vfo.curvature, "expected target curvature (default: the metric's)");
  vf->add_flag("--use-omega", vfo.use_omega, "treat the CSV omega column as the expected omega");
  add_tolerances(vf, vfo.tol);
  vfo.o.add(vf);
  vf->callback([&] {
    action = [&] {
      const io::MapTable in = io::read_map_csv(vfo.in);
      if (!in.R || !in.S) throw UsageError("verify: input needs R and S columns");
      verify::MetricSpec metric = vfo.metric == "flat"               ? verify::MetricSpec::flat()
                                  : vfo.metric == "upper-half-plane" ? verify::MetricSpec::upper_half_plane()
                                  : vfo.metric == "lower-half-plane" ? verify::MetricSpec::lower_half_plane()
                                  : vfo.metric == "sphere"           ? verify::MetricSpec::sphere()
                                  : vfo.metric == "cylinder"         ? verify::MetricSpec::cylinder(vfo.t)
                                                                     : verify::MetricSpec::strip();
      verify::Expectations ex;
      if (vfo.hopf_re || vfo.hopf_im) ex.hopf_constant = cplx(vfo.hopf_re.value_or(0), vfo.hopf_im.value_or(0));
      if (vfo.curvature) ex.curvature = *vfo.curvature;
      if (vfo.use_omega) {
        if (!in.omega) throw UsageError("verify: --use-omega needs an omega column");
        ex.omega = *in.omega;
      }
      run.computing = true;
      const Analysis a = analyze(combine(*in.R, *in.S), metric, ex, vfo.tol);
      return finish_analysis(run, "verify", vf, a, {}, Json::object(), vfo.o);
    };
  });

  // ---- solve-beltrami
  CLI::App* sb = leaf(&app, "solve-beltrami", "solve e^omega u_zbar = e^-omega u_z for u = R + iS on a grid");
  struct {
    std::string case_name, omega_csv;
    std::optional<double> anchor_S, curvature;
    beltrami::SolveOptions solver;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } sbo;
  const GridDefaults sb_grid{"129x129", 0.5, 1.5, 0.0, 1.0};
  auto* sb_case = sb->add_option("--case", sbo.case_name,
                                 "built-in omega = -log tanh xi with Dirichlet data from u = eta - (i/2) sinh 2xi "
                                 "(the default when --omega-csv is absent)")
                      ->check(CLI::IsMember({"li-tam"}));
  auto* sb_csv = sb->add_option("--omega-csv", sbo.omega_csv,
                                "CSV with omega at every node and R on the boundary")
                     ->check(CLI::ExistingFile);
  sb_case->excludes(sb_csv);
  num(sb, "anchor-S", sbo.anchor_S, "S at node (0, 0) (default: closed form, CSV S, or 0)");
  num(sb, "curvature", sbo.curvature, "expected target curvature (li-tam: -1)");
  num(sb, "solver-tol", sbo.solver.tol, "SOR stopping residual");
  sb->add_option("--max-iter", sbo.solver.max_iter, "SOR sweeps")->check(CLI::PositiveNumber)->capture_default_str();
  num(sb, "relaxation", sbo.solver.relaxation, "SOR factor")->check(CLI::Range(0.0, 2.0));
  num(sb, "omega-floor", sbo.solver.omega_floor, "smallest admissible |omega|");
  sbo.grid.add(sb, sb_grid);
  add_tolerances(sb, sbo.tol);
  sbo.o.add(sb);
  sb->callback([&] {
    action = [&] {
      const bool from_csv = !sbo.omega_csv.empty();
      const std::string cs = from_csv ? "" : (sbo.case_name.empty() ? "li-tam" : sbo.case_name);
      auto exact = [](double x, double y) { return cplx(y, -0.5 * std::sinh(2 * x)); };
      RealGrid omega;
      beltrami::BoundaryData bc;
      double anchor = 0;
      std::optional<double> curvature = sbo.curvature;
      if (from_csv) {
        if (sbo.grid.any()) throw UsageError("solve-beltrami: the grid comes from --omega-csv");
        const io::MapTable in = io::read_map_csv(sbo.omega_csv);
        if (!in.omega || in.omega->regular_count() != in.omega->values.size())
          throw UsageError("solve-beltrami: --omega-csv needs omega at every node");
        if (!in.R) throw UsageError("solve-beltrami: --omega-csv needs R on the boundary");
        const RealGrid& R = *in.R;
        for (int i = 0; i < R.nx(); ++i)
          if (!R.mask(i, 0) || !R.mask(i, R.ny() - 1)) throw UsageError("solve-beltrami: R missing on the boundary");
        for (int j = 0; j < R.ny(); ++j)
          if (!R.mask(0, j) || !R.mask(R.nx() - 1, j)) throw UsageError("solve-beltrami: R missing on the boundary");
        omega = *in.omega;
        bc = beltrami::BoundaryData::from_grid(R);
        anchor = sbo.anchor_S.value_or(in.S && in.S->mask(0, 0) ? (*in.S)(0, 0) : 0.0);
      } else {
        const GridGeometry g = sbo.grid.resolve(sb_grid);
        if (!(g.x0 > 0)) throw ParameterError("solve-beltrami: the li-tam case needs xi > 0");
        omega = sample<double>(g, [](double x, double) { return -std::log(std::tanh(x)); });
        bc = beltrami::BoundaryData::from_function(g, [&](double x, double y) { return exact(x, y).real(); });
        anchor = sbo.anchor_S.value_or(exact(g.x0, g.y0).imag());
        curvature = curvature.value_or(-1.0);
      }
      const GridGeometry& g = omega.geom;
      run.computing = true;
      const auto res = beltrami::solve_R(omega, bc, sbo.solver);
      const auto rec_S = beltrami::reconstruct_S(res.R, omega, 0, 0, anchor);
      const ComplexGrid u = combine(res.R, rec_S.S);

      // target metric from the map itself, with Lambda = 1
      const auto rec = verify::reconstruct_metric(u, cplx(0, 0));
      RealGrid F(g);
      F.values = rec.eF.values.log();
      F.mask = rec.eF.mask;
      verify::Expectations ex;
      ex.hopf_constant = 1.0;
      ex.omega = omega;
      if (curvature) ex.curvature = *curvature;
      const auto metric = verify::MetricSpec::sampled(F, curvature.value_or(std::nan("")));
      Analysis a = analyze(u, metric, ex, sbo.tol);

      std::vector<verify::Check> extra{below("solver_residual", res.converged ? res.residual : std::nan(""),
                                             sbo.solver.tol)};
      Json diag{{"case", from_csv ? "omega-csv" : cs},
                {"iterations", res.iterations},
                {"converged", res.converged},
                {"solver_residual", io::number(res.residual)},
                {"S_compatibility", io::number(rec_S.compatibility)}};
      if (!from_csv) {
        double err_R = 0;
        for (int j = 0; j < g.ny; ++j)
          for (int i = 0; i < g.nx; ++i) err_R = std::max(err_R, std::abs(res.R(i, j) - exact(g.x(i), g.y(j)).real()));
        extra.push_back(below("R_sup_error", err_R, 1e-3));
        diag["R_sup_error"] = io::number(err_R);
      }
      return finish_analysis(run, "solve-beltrami", sb, a, extra, diag, sbo.o);
    };
  });

  // ---- example
  CLI::App* ex = leaf(&app, "example", "explicit harmonic maps");
  ex->require_subcommand(1);

  CLI::App* wolf = leaf(ex, "wolf", "u = y + i t arctan(sinh u(x)) into the hyperbolic cylinder");
  struct {
    double t = 2;
    int nodes = 10001;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } wo;
  const GridDefaults wolf_grid{"101x101", 0.4, 0.5, 0.0, 0.1};
  num(wolf, "t", wo.t, "width parameter, t > 1");
  wolf->add_option("--nodes", wo.nodes, "RK4 nodes on [0, 1], at least 10001")->capture_default_str();
  wo.grid.add(wolf, wolf_grid);
  add_tolerances(wolf, wo.tol);
  wo.o.add(wolf);
  wolf->callback([&] {
    action = [&] {
      if (!(wo.t > 1)) throw ParameterError("example wolf: need t > 1");
      if (wo.nodes < 10001) throw ParameterError("example wolf: need --nodes >= 10001");
      const auto g = wo.grid.resolve(wolf_grid);
      if (g.x0 < 0 || g.x1 > 1) throw ParameterError("example wolf: xi must lie in [0, 1]");
      run.computing = true;
      const auto sol = catalog::wolf_solve(wo.t, wo.nodes);
      const auto u = catalog::wolf_map(sol, g);
      verify::Expectations e;
      e.hopf_constant = sol.hopf_constant();
      const Analysis a = analyze(u, verify::MetricSpec::cylinder(wo.t), e, wo.tol);
      // the same map through the one-soliton closed form
      const auto mp = catalog::wolf_as_soliton(wo.t, sol.c0);
      double agree = 0;
      for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
          const auto s = mapgen::evaluate(catalog::wolf_specific_coords(g.z(i, j), wo.t, sol.c0), mp);
          agree = std::max(agree, s.regular ? std::abs(s.u() - u(i, j)) : std::numeric_limits<double>::infinity());
        }
      const Json diag{{"du0", sol.du0},
                      {"c0", sol.c0},
                      {"hopf_constant", sol.hopf_constant()},
                      {"first_integral_drift", sol.first_integral_drift},
                      {"shooting_iterations", sol.shooting_iterations}};
      return finish_analysis(run, "example wolf", wolf, a,
                             {below("boundary", sol.boundary_error, 1e-10), below("soliton_agreement", agree, 1e-6)},
                             diag, wo.o);
    };
  });

  CLI::App* hc = leaf(ex, "half-cylinder", "u = x + i v_c(y) into the upper half-plane");
  struct {
    double c = 0.5;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } hco;
  const GridDefaults hc_grid{"101x101", 0.0, 0.1, 1.2, 1.3};
  num(hc, "c", hco.c, "profile constant, c > 0");
  hco.grid.add(hc, hc_grid);
  add_tolerances(hc, hco.tol);
  hco.o.add(hc);
  hc->callback([&] {
    action = [&] {
      const auto h = catalog::HalfCylinder::make(hco.c);
      const auto g = hco.grid.resolve(hc_grid);
      run.computing = true;
      verify::Expectations e;
      e.hopf_constant = h.hopf_constant();
      const Analysis a = analyze(catalog::half_cylinder_map(hco.c, g), verify::MetricSpec::upper_half_plane(), e, hco.tol);
      return finish_analysis(run, "example half-cylinder", hc, a, {}, Json{{"hopf_constant", h.hopf_constant()}},
                             hco.o);
    };
  });

  CLI::App* stw = leaf(ex, "stw", "u = alpha x + h(y) + i g(y) into the strip 0 < S < pi");
  struct {
    double alpha = 1, a = 1;
    std::optional<double> b;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } so;
  const GridDefaults stw_grid{"101x101", 0.0, 0.1, 1.0, 1.1};
  num(stw, "alpha", so.alpha, "alpha > 0");
  num(stw, "a", so.a, "a");
  num(stw, "b", so.b, "b > 0 (default: root of the quarter-period condition)");
  so.grid.add(stw, stw_grid);
  add_tolerances(stw, so.tol);
  so.o.add(stw);
  stw->callback([&] {
    action = [&] {
      const auto g = so.grid.resolve(stw_grid);
      if (so.b) catalog::STWParams::make(so.alpha, so.a, *so.b);
      run.computing = true;
      const auto p = so.b ? catalog::STWParams::make(so.alpha, so.a, *so.b) : catalog::STWParams::solve(so.alpha, so.a);
      const double cond = catalog::stw_quarter_period_condition(p.alpha, p.a, p.b);
      const Analysis a = analyze(catalog::stw_map(p, g), verify::MetricSpec::strip(), {}, so.tol);
      const Json diag{{"b", p.b},   {"w1", p.w1}, {"w2", p.w2},   {"ell", p.ell},
                      {"tau", p.tau}, {"C", p.C},   {"m", p.m}, {"quarter_period_condition", cond}};
      return finish_analysis(run, "example stw", stw, a, {below("quarter_period", std::abs(cond), 1e-8)}, diag, so.o);
    };
  });

  CLI::App* lt = leaf(ex, "li-tam", "u = x + (i/a) sinh(a y), or its zeta-form, into a half-plane");
  struct {
    double a = 1;
    std::string form = "z";
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } lto;
  const GridDefaults lt_grid_z{"201x201", 0.0, 1.0, 1.0, 2.0};
  const GridDefaults lt_grid_zeta{"201x201", 0.5, 0.525, 0.0, 0.025};
  num(lt, "a", lto.a, "a > 0");
  lt->add_option("--form", lto.form, "z: x + (i/a) sinh(a y); zeta: 2 eta/a - (i/a) sinh 2 xi")
      ->check(CLI::IsMember({"z", "zeta"}))
      ->capture_default_str();
  lto.grid.add(lt, lt_grid_z);
  add_tolerances(lt, lto.tol);
  lto.o.add(lt);
  lt->callback([&] {
    action = [&] {
      if (!(lto.a > 0)) throw ParameterError("example li-tam: need a > 0");
      const bool zeta = lto.form == "zeta";
      const auto form = zeta ? catalog::LiTamForm::zeta : catalog::LiTamForm::z;
      const auto g = lto.grid.resolve(zeta ? lt_grid_zeta : lt_grid_z);
      run.computing = true;
      verify::Expectations e;
      if (zeta) {
        e.hopf_constant = 1.0;
        e.omega = sample<double>(g, [](double x, double) { return catalog::litam_omega(x); });
      }
      const Analysis a = analyze(catalog::litam_map(lto.a, g, form), catalog::litam_metric(form), e, lto.tol);
      return finish_analysis(run, "example li-tam", lt, a, {}, Json::object(), lto.o);
    };
  });

  CLI::App* bx = leaf(ex, "backlund", "u = (eta^2 tanh 2xi + xi/2) + i (eta^2/cosh 2xi - cosh 2xi/4)");
  struct {
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } bxo;
  const GridDefaults bk_grid{"401x831", -0.5, 0.5, 0.6 * std::cosh(1.0), 3.0};
  bxo.grid.add(bx, bk_grid);
  add_tolerances(bx, bxo.tol);
  bxo.o.add(bx);
  bx->callback([&] {
    action = [&] {
      const auto g = bxo.grid.resolve(bk_grid);
      run.computing = true;
      verify::Expectations e;
      e.hopf_constant = 1.0;
      e.omega = backlund::closed_form_omega_grid(backlund::Branch::A, g);
      const Analysis a = analyze(backlund::backlund_example_map(g), verify::MetricSpec::upper_half_plane(), e, bxo.tol);
      return finish_analysis(run, "example backlund", bx, a, {}, Json{{"omega", "2 artanh(cosh 2xi/(2 eta))"}},
                             bxo.o);
    };
  });

  // ---- backlund
  CLI::App* bk = leaf(&app, "backlund", "integrate omega from a sine-Gordon seed theta");
  struct {
    std::string theta = "kink";
    std::optional<int> seed_i, seed_j;
    std::optional<double> seed_omega;
    double select_tol = 1e-5, consistency_tol = 1e-6;
    int order = 4;
    bool verify_map = false;
    GridOpts grid;
    verify::Tolerances tol;
    Outputs o;
  } bko;
  bk->add_option("--theta", bko.theta, "seed: kink theta = arcsin tanh 2xi (its sign is fixed by branch selection)")
      ->check(CLI::IsMember({"kink"}))
      ->capture_default_str();
  bk->add_option("--seed-i", bko.seed_i, "seed node xi index (default: centre)");
  bk->add_option("--seed-j", bko.seed_j, "seed node eta index (default: centre)");
  num(bk, "seed-omega", bko.seed_omega, "omega at the seed node (default: selected closed form)");
  num(bk, "select-tol", bko.select_tol, "pair-relation tolerance for branch selection");
  num(bk, "consistency-tol", bko.consistency_tol, "allowed difference between integration orders");
  bk->add_option("--order", bko.order, "finite-difference order of the residuals")
      ->check(CLI::IsMember({2, 4}))
      ->capture_default_str();
  bk->add_flag("--verify-map", bko.verify_map, "also verify the explicit example map against the integrated omega");
  bko.grid.add(bk, bk_grid);
  add_tolerances(bk, bko.tol);
  bko.o.add(bk);
  bk->callback([&] {
    action = [&] {
      const auto g = bko.grid.resolve(bk_grid);
      const int si = bko.seed_i.value_or(g.nx / 2), sj = bko.seed_j.value_or(g.ny / 2);
      if (si < 0 || si >= g.nx || sj < 0 || sj >= g.ny) throw ParameterError("backlund: seed node outside the grid");
      run.computing = true;
      const auto sel = backlund::select_branch(g, bko.select_tol, bko.order);
      Json cands = Json::array();
      for (const auto& c : sel.candidates)
        cands.push_back(Json{{"branch", backlund::to_string(c.branch)},
                             {"theta_sign", c.theta_sign},
                             {"omega_sign", c.omega_sign},
                             {"sinh_gordon", io::number(c.sinh_gordon)},
                             {"r1", io::number(c.r1)},
                             {"r2", io::number(c.r2)},
                             {"pass", c.pass}});
      Json diag{{"branch_found", sel.found}, {"candidates", cands}};
      std::vector<verify::Check> extra;
      if (!sel.found) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& c : sel.candidates) best = std::min(best, std::max(c.r1, c.r2));
        extra.push_back({"branch_selection", best, bko.select_tol, false});
        io::MapTable table{g};
        return finish(run, "backlund", bk, io::empty_report_json(), extra, diag, &table, bko.o);
      }
      const auto& c = sel.selected;
      diag["branch"] = sel.label();
      extra.push_back(below("branch_selection", std::max(c.r1, c.r2), bko.select_tol));

      const auto theta = backlund::kink_grid(g, c.theta_sign);
      const auto exact = backlund::closed_form_omega_grid(c.branch, g, c.omega_sign);
      backlund::IntegrateOptions iopt;
      iopt.consistency_tol = bko.consistency_tol;
      iopt.throw_on_inconsistency = false;
      const auto res = backlund::backlund_integrate(theta, {si, sj, bko.seed_omega.value_or(exact(si, sj))}, iopt);
      extra.push_back(below("seed_sine_gordon", backlund::sine_gordon_residual(theta, bko.order), 1e-6));
      extra.push_back(below("path_consistency", res.path_consistency, bko.consistency_tol));
      extra.push_back(below("omega_vs_closed_form", max_abs(difference(res.omega, exact)), 1e-5));
      diag["sinh_gordon"] = io::number(backlund::sinh_gordon_residual(res.omega, bko.order));

      if (bko.verify_map) {
        verify::Expectations e;
        e.hopf_constant = 1.0;
        e.omega = res.omega;
        const Analysis a = analyze(backlund::backlund_example_map(g), verify::MetricSpec::upper_half_plane(), e, bko.tol);
        return finish_analysis(run, "backlund", bk, a, extra, diag, bko.o);
      }
      io::MapTable table{g};
      table.omega = res.omega;
      return finish(run, "backlund", bk, io::empty_report_json(), extra, diag, &table, bko.o);
    };
  });

  // ---- selftest
  CLI::App* st = leaf(&app, "selftest", "elliptic function identity suite");
  struct {
    std::uint64_t seed = 1;
    int samples = 10000;
    Outputs o;
  } sto;
  st->add_option("--seed", sto.seed, "random seed for the sample points")->capture_default_str();
  st->add_option("--samples", sto.samples, "number of random (u, m) points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sto.o.add(st);
  st->callback([&] {
    action = [&] {
      run.computing = true;
      return finish(run, "selftest", st, io::empty_report_json(), elliptic_suite(sto.seed, sto.samples),
                    Json::object(), nullptr, sto.o);
    };
  });

  try {
    std::vector<std::string> args = expand_config(argv_in, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return run.computing ? numeric_error : usage_error;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return numeric_error;
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return numeric_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numeric_error;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace hmap::cli
