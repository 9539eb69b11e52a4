#include "hmap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace hmap::io {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t k = 0;
  while (k < s.size() && s[k] == ' ') ++k;
  return s.substr(k);
}

double parse_cell(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("csv line " + std::to_string(line) + ": not a finite number: '" + s + "'");
  }
}

const std::optional<RealGrid>* column(const MapTable& t, std::size_t k) {
  switch (k) {
    case 2: return &t.R;
    case 3: return &t.S;
    case 4: return &t.omega;
    case 5: return &t.eF;
    case 6: return &t.res_harmonic;
    case 7: return &t.res_beltrami;
    default: return nullptr;
  }
}

std::optional<RealGrid>* column(MapTable& t, std::size_t k) {
  return const_cast<std::optional<RealGrid>*>(column(static_cast<const MapTable&>(t), k));
}

// Recovers the grid extent from one coordinate's distinct values.
bool uniform(const std::vector<double>& v) {
  if (v.size() < 2) return false;
  const double h = (v.back() - v.front()) / static_cast<double>(v.size() - 1);
  if (!(h > 0)) return false;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(v[k] - (v.front() + static_cast<double>(k) * h)) > 1e-9 * std::max(1.0, std::abs(v[k])))
      return false;
  return true;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_map_csv(std::ostream& os, const MapTable& t) {
  const auto& h = csv_header();
  for (std::size_t k = 0; k < h.size(); ++k) os << (k ? "," : "") << h[k];
  os << '\n';
  for (std::size_t k = 2; k < h.size(); ++k) {
    const auto* c = column(t, k);
    if (*c && !(*c)->geom.same_as(t.geom)) throw ParameterError("csv: column " + h[k] + " is on a different grid");
  }
  std::string line;
  for (int j = 0; j < t.geom.ny; ++j)
    for (int i = 0; i < t.geom.nx; ++i) {
      line = format_double(t.geom.x(i));
      line += ',';
      line += format_double(t.geom.y(j));
      for (std::size_t k = 2; k < h.size(); ++k) {
        line += ',';
        const auto& c = *column(t, k);
        if (c && c->mask(i, j) && std::isfinite((*c)(i, j))) line += format_double((*c)(i, j));
      }
      line += '\n';
      os << line;
    }
}

void write_map_csv(const std::string& path, const MapTable& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path);
  write_map_csv(f, t);
  if (!f) throw FormatError("write failed: " + path);
}

MapTable read_map_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("csv: empty input");
  const auto head = split(trim(line));
  if (head.size() < 2 || trim(head[0]) != "xi" || trim(head[1]) != "eta")
    throw FormatError("csv: header must start with xi,eta");
  const auto& known = csv_header();
  std::vector<std::size_t> slot(head.size());
  for (std::size_t k = 2; k < head.size(); ++k) {
    const auto it = std::find(known.begin() + 2, known.end(), trim(head[k]));
    if (it == known.end()) throw FormatError("csv: unknown column '" + trim(head[k]) + "'");
    slot[k] = static_cast<std::size_t>(it - known.begin());
    for (std::size_t q = 2; q < k; ++q)
      if (slot[q] == slot[k]) throw FormatError("csv: duplicate column '" + trim(head[k]) + "'");
  }

  std::vector<double> xs, ys;
  std::vector<std::vector<double>> cols(head.size());
  std::vector<std::vector<bool>> present(head.size());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != head.size())
      throw FormatError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(head.size()) +
                        " cells, got " + std::to_string(cells.size()));
    xs.push_back(parse_cell(trim(cells[0]), lineno));
    ys.push_back(parse_cell(trim(cells[1]), lineno));
    for (std::size_t k = 2; k < cells.size(); ++k) {
      const std::string c = trim(cells[k]);
      present[k].push_back(!c.empty());
      cols[k].push_back(c.empty() ? nan : parse_cell(c, lineno));
    }
  }
  if (xs.empty()) throw FormatError("csv: no data rows");

  // xi varies fastest: the first row of constant eta fixes nx
  std::size_t nx = 1;
  while (nx < ys.size() && ys[nx] == ys[0]) ++nx;
  if (xs.size() % nx != 0) throw FormatError("csv: node count is not a multiple of the row length");
  const std::size_t ny = xs.size() / nx;
  std::vector<double> xrow(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(nx)), ycol;
  for (std::size_t j = 0; j < ny; ++j) ycol.push_back(ys[j * nx]);
  if (!uniform(xrow) || !uniform(ycol)) throw FormatError("csv: nodes do not form a uniform increasing grid");
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      if (xs[j * nx + i] != xrow[i] || ys[j * nx + i] != ycol[j])
        throw FormatError("csv: node order is not eta-major with xi varying fastest");

  MapTable t;
  t.geom = GridGeometry::make(static_cast<int>(nx), static_cast<int>(ny), xrow.front(), xrow.back(), ycol.front(),
                              ycol.back());
  for (std::size_t k = 2; k < head.size(); ++k) {
    if (std::none_of(present[k].begin(), present[k].end(), [](bool b) { return b; })) continue;
    RealGrid g(t.geom);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t n = j * nx + i;
        g(static_cast<int>(i), static_cast<int>(j)) = present[k][n] ? cols[k][n] : 0.0;
        g.mask(static_cast<int>(i), static_cast<int>(j)) = present[k][n];
      }
    *column(t, slot[k]) = std::move(g);
  }
  return t;
}

MapTable read_map_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path);
  return read_map_csv(f);
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json report_json(const verify::VerificationReport& r) {
  Json j;
  j["harmonic_max"] = number(r.harmonic_max);
  j["beltrami_max"] = number(r.beltrami_max);
  j["hopf_holomorphy_max"] = number(r.hopf_holomorphy_max);
  j["hopf_std"] = number(r.hopf_std);
  j["curvature_dev_max"] = number(r.curvature_dev_max);
  j["jacobian_min"] = number(r.jacobian_min);
  j["orthogonality_max"] = number(r.orthogonality_max);
  j["phi_harmonicity_max"] = number(r.phi_harmonicity_max);
  j["hopf_mean_re"] = number(r.hopf_mean.real());
  j["hopf_mean_im"] = number(r.hopf_mean.imag());
  j["hopf_min_abs"] = number(r.hopf_min_abs);
  j["curvature_formula_dev"] = number(r.curvature_formula_dev);
  j["reconstructed_harmonic_max"] = number(r.reconstructed_harmonic_max);
  j["metric_ratio_dev"] = number(r.metric_ratio_dev);
  j["lambda_re"] = number(r.lambda.real());
  j["lambda_im"] = number(r.lambda.imag());
  j["expected_curvature"] = number(r.expected_curvature);
  j["orientation_consistent"] = r.orientation_consistent;
  j["metric"] = r.metric_name;
  j["nx"] = r.grid.nx;
  j["ny"] = r.grid.ny;
  j["xi0"] = r.grid.x0;
  j["xi1"] = r.grid.x1;
  j["eta0"] = r.grid.y0;
  j["eta1"] = r.grid.y1;
  Json tol = Json::object();
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    tol[c.name] = number(c.tolerance);
    checks.push_back(Json{{"name", c.name}, {"value", number(c.value)}, {"tolerance", number(c.tolerance)},
                          {"pass", c.pass}});
  }
  j["tolerances"] = tol;
  j["checks"] = checks;
  j["passed"] = r.passed();
  return j;
}

Json empty_report_json() {
  Json j = report_json(verify::VerificationReport{});
  for (auto& [k, v] : j.items())
    if (v.is_number() || k == "metric" || k == "orientation_consistent") v = nullptr;
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open for writing: " + path);
  f << j.dump(2) << '\n';
  if (!f) throw FormatError("write failed: " + path);
}

Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open: " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace hmap::io
