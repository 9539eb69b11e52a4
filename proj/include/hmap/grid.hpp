#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hmap/core.hpp"

namespace hmap {

/// Uniform node-centred rectangle [x0, x1] x [y0, y1] with nx * ny nodes,
/// endpoints included. x is the first (xi) axis, y the second (eta).
struct GridGeometry {
  int nx = 3;
  int ny = 3;
  double x0 = 0, x1 = 1;
  double y0 = 0, y1 = 1;

  static GridGeometry make(int nx, int ny, double x0, double x1, double y0, double y1) {
    GridGeometry g{nx, ny, x0, x1, y0, y1};
    g.validate();
    return g;
  }

  void validate() const {
    if (nx < 3 || ny < 3) throw ParameterError("grid: need at least 3 nodes per axis");
    if (!(x1 > x0) || !(y1 > y0)) throw ParameterError("grid: ranges must be increasing");
    if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(y0) || !std::isfinite(y1))
      throw ParameterError("grid: ranges must be finite");
  }

  double hx() const { return (x1 - x0) / (nx - 1); }
  double hy() const { return (y1 - y0) / (ny - 1); }
  double x(int i) const { return i == nx - 1 ? x1 : x0 + i * hx(); }
  double y(int j) const { return j == ny - 1 ? y1 : y0 + j * hy(); }
  std::complex<double> z(int i, int j) const { return {x(i), y(j)}; }

  bool same_as(const GridGeometry& o) const {
    return nx == o.nx && ny == o.ny && x0 == o.x0 && x1 == o.x1 && y0 == o.y0 && y1 == o.y1;
  }
};

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Sampled field on a GridGeometry. values(i, j) sits at (x(i), y(j)).
/// mask(i, j) is true at regular nodes; masked nodes are ignored by norms.
template <class Scalar>
struct FieldGrid {
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  GridGeometry geom;
  Values values;
  Mask mask;

  FieldGrid() = default;

  explicit FieldGrid(const GridGeometry& g, Scalar fill = Scalar(0))
      : geom(g), values(Values::Constant(g.nx, g.ny, fill)), mask(Mask::Constant(g.nx, g.ny, true)) {}

  int nx() const { return geom.nx; }
  int ny() const { return geom.ny; }
  Scalar& operator()(int i, int j) { return values(i, j); }
  const Scalar& operator()(int i, int j) const { return values(i, j); }
  bool regular(int i, int j) const { return mask(i, j); }
  Eigen::Index regular_count() const { return mask.count(); }
};

using RealGrid = FieldGrid<double>;
using ComplexGrid = FieldGrid<std::complex<double>>;

/// Fill a grid from f(x, y).
template <class Scalar, class Fn>
FieldGrid<Scalar> sample(const GridGeometry& g, Fn&& f) {
  FieldGrid<Scalar> out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = static_cast<Scalar>(f(g.x(i), g.y(j)));
  return out;
}

/// Fill a grid from a Flagged-returning f(x, y); flagged nodes are masked.
template <class Fn>
RealGrid sample_flagged(const GridGeometry& g, Fn&& f) {
  RealGrid out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Flagged<double> v = f(g.x(i), g.y(j));
      out(i, j) = v.ok() ? v.value : 0.0;
      out.mask(i, j) = v.ok();
    }
  return out;
}

/// Masked maximum of |value|. Returns 0 when no node is regular.
/// Scan order is fixed (column-major) so the result is reproducible.
template <class Scalar>
double max_abs(const FieldGrid<Scalar>& f) {
  double m = 0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i)
      if (f.mask(i, j)) m = std::max(m, static_cast<double>(std::abs(f(i, j))));
  return m;
}

/// Masked minimum of a real field; +inf when no node is regular.
inline double min_value(const RealGrid& f) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i)
      if (f.mask(i, j)) m = std::min(m, f(i, j));
  return m;
}

/// Masked mean and population standard deviation, fixed summation order.
template <class Scalar>
std::pair<Scalar, double> mean_std(const FieldGrid<Scalar>& f) {
  Scalar sum(0);
  Eigen::Index n = 0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i)
      if (f.mask(i, j)) {
        sum += f(i, j);
        ++n;
      }
  if (n == 0) return {Scalar(0), 0.0};
  const Scalar mean = sum / static_cast<double>(n);
  double var = 0;
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i)
      if (f.mask(i, j)) var += std::norm(std::complex<double>(f(i, j) - mean));
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

/// Node-wise difference with the union of masks.
template <class Scalar>
FieldGrid<Scalar> difference(const FieldGrid<Scalar>& a, const FieldGrid<Scalar>& b) {
  if (!a.geom.same_as(b.geom)) throw ParameterError("difference: grid geometries differ");
  FieldGrid<Scalar> out(a.geom);
  out.values = a.values - b.values;
  out.mask = a.mask && b.mask;
  return out;
}

/// Real or imaginary part of a complex grid.
inline RealGrid real_part(const ComplexGrid& u) {
  RealGrid out(u.geom);
  out.values = u.values.real();
  out.mask = u.mask;
  return out;
}

inline RealGrid imag_part(const ComplexGrid& u) {
  RealGrid out(u.geom);
  out.values = u.values.imag();
  out.mask = u.mask;
  return out;
}

inline ComplexGrid combine(const RealGrid& re, const RealGrid& im) {
  if (!re.geom.same_as(im.geom)) throw ParameterError("combine: grid geometries differ");
  ComplexGrid out(re.geom);
  for (int j = 0; j < re.ny(); ++j)
    for (int i = 0; i < re.nx(); ++i) out(i, j) = {re(i, j), im(i, j)};
  out.mask = re.mask && im.mask;
  return out;
}

/// Clear the mask on the outermost ring of nodes.
template <class Scalar>
void mask_boundary(FieldGrid<Scalar>& f) {
  f.mask.row(0).setConstant(false);
  f.mask.row(f.nx() - 1).setConstant(false);
  f.mask.col(0).setConstant(false);
  f.mask.col(f.ny() - 1).setConstant(false);
}

/// Parse "NXxNY" (e.g. "201x201").
inline std::pair<int, int> parse_grid_size(const std::string& s) {
  const auto pos = s.find('x');
  if (pos == std::string::npos) throw ParameterError("grid size must look like NXxNY: " + s);
  try {
    std::size_t a = 0, b = 0;
    const int nx = std::stoi(s.substr(0, pos), &a);
    const int ny = std::stoi(s.substr(pos + 1), &b);
    if (a != pos || b != s.size() - pos - 1) throw std::invalid_argument("trailing");
    return {nx, ny};
  } catch (const std::exception&) {
    throw ParameterError("grid size must look like NXxNY: " + s);
  }
}

}  // namespace hmap
