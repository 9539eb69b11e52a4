#pragma once

// Bit-stable data interchange: map grids as CSV, verification reports as JSON.
//
// CSV: header `xi,eta,R,S,omega,eF,res_harmonic,res_beltrami`, one node per
// line, rows of constant eta in increasing order with xi varying fastest,
// values printed with 17 significant digits, empty cells where a column is
// masked or absent.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hmap/grid.hpp"
#include "hmap/verify.hpp"

namespace hmap::io {

using Json = nlohmann::ordered_json;

/// Thrown for unreadable or malformed input files. Maps to CLI exit code 2.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One column per CSV field after xi, eta. Absent columns print as empty cells.
struct MapTable {
  MapTable() = default;
  explicit MapTable(const GridGeometry& g) : geom(g) {}

  GridGeometry geom;
  std::optional<RealGrid> R, S, omega, eF, res_harmonic, res_beltrami;
};

inline const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> h{"xi", "eta", "R", "S", "omega", "eF", "res_harmonic", "res_beltrami"};
  return h;
}

/// "%.17g"; the caller handles masking.
std::string format_double(double v);

void write_map_csv(std::ostream& os, const MapTable& t);
void write_map_csv(const std::string& path, const MapTable& t);

/// Reads a CSV in the layout above. The header must start with xi,eta; other
/// known columns may appear in any order, unknown ones are rejected. The grid
/// is recovered from the node order and must be uniform. A column whose cells
/// are all empty is treated as absent; empty cells elsewhere are masked.
MapTable read_map_csv(std::istream& is);
MapTable read_map_csv(const std::string& path);

/// NaN and infinities become null.
Json number(double v);

/// Flat object with the VerificationReport fields, the grid, tolerances and
/// per-check outcomes.
Json report_json(const verify::VerificationReport& r);

/// Same keys with every residual null, for runs that produce no map.
Json empty_report_json();

/// Two-space indented, trailing newline.
void write_json(const std::string& path, const Json& j);

Json read_json(const std::string& path);

}  // namespace hmap::io
