#include "hmap/beltrami.hpp"

#include <cmath>
#include <string>

#include "hmap/fd.hpp"

namespace hmap::beltrami {

namespace {

// Half-node coefficients: ax(i, j) sits between nodes i and i+1 on row j,
// by(i, j) between j and j+1 on column i.
struct Coefficients {
  Eigen::ArrayXXd ax, by;
};

Coefficients coefficients(const RealGrid& omega) {
  const int nx = omega.nx(), ny = omega.ny();
  const Eigen::ArrayXXd t = omega.values.tanh();
  const Eigen::ArrayXXd ct = t.inverse();
  Coefficients c{Eigen::ArrayXXd(nx - 1, ny), Eigen::ArrayXXd(nx, ny - 1)};
  c.ax = 0.5 * (t.topRows(nx - 1) + t.bottomRows(nx - 1));
  c.by = 0.5 * (ct.leftCols(ny - 1) + ct.rightCols(ny - 1));
  return c;
}

void check_coefficient(const RealGrid& omega, double floor) {
  int sign = 0;
  for (int j = 0; j < omega.ny(); ++j)
    for (int i = 0; i < omega.nx(); ++i) {
      const double w = omega(i, j);
      if (!omega.mask(i, j) || !std::isfinite(w))
        throw DomainError("solve_R: omega is singular at node (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      if (std::abs(w) < floor)
        throw DomainError("solve_R: |omega| below floor at node (" + std::to_string(i) + ", " +
                          std::to_string(j) + "); coth(omega) is singular there");
      const int s = w > 0 ? 1 : -1;
      if (sign != 0 && s != sign) throw DomainError("solve_R: omega changes sign on the grid");
      sign = s;
    }
}

// Gauss-Seidel target and diagonal at an interior node.
inline double gs_value(const Eigen::ArrayXXd& R, const Coefficients& c, int i, int j, double ihx2,
                       double ihy2, double& diag) {
  const double aE = c.ax(i, j), aW = c.ax(i - 1, j), bN = c.by(i, j), bS = c.by(i, j - 1);
  diag = (aE + aW) * ihx2 + (bN + bS) * ihy2;
  return ((aE * R(i + 1, j) + aW * R(i - 1, j)) * ihx2 + (bN * R(i, j + 1) + bS * R(i, j - 1)) * ihy2) /
         diag;
}

double max_residual(const Eigen::ArrayXXd& R, const Coefficients& c, double ihx2, double ihy2) {
  double m = 0, diag;
  for (int j = 1; j < R.cols() - 1; ++j)
    for (int i = 1; i < R.rows() - 1; ++i)
      m = std::max(m, std::abs(gs_value(R, c, i, j, ihx2, ihy2, diag) - R(i, j)));
  return m;
}

}  // namespace

BoundaryData BoundaryData::from_grid(const RealGrid& R) {
  const int nx = R.nx(), ny = R.ny();
  return {R.values.col(0).matrix(), R.values.col(ny - 1).matrix(), R.values.row(0).transpose().matrix(),
          R.values.row(nx - 1).transpose().matrix()};
}

void BoundaryData::validate(const GridGeometry& g) const {
  if (south.size() != g.nx || north.size() != g.nx || west.size() != g.ny || east.size() != g.ny)
    throw ParameterError("boundary data does not match the grid");
  if (!south.allFinite() || !north.allFinite() || !west.allFinite() || !east.allFinite())
    throw ParameterError("boundary data must be finite");
}

SolveResult solve_R(const RealGrid& omega, const BoundaryData& bc, const SolveOptions& opt) {
  const GridGeometry& g = omega.geom;
  bc.validate(g);
  if (!(opt.relaxation > 0 && opt.relaxation < 2)) throw ParameterError("solve_R: relaxation must lie in (0, 2)");
  if (!(opt.tol > 0) || opt.max_iter < 1) throw ParameterError("solve_R: need tol > 0 and max_iter >= 1");
  check_coefficient(omega, opt.omega_floor);

  const int nx = g.nx, ny = g.ny;
  const Coefficients c = coefficients(omega);
  const double ihx2 = 1 / (g.hx() * g.hx()), ihy2 = 1 / (g.hy() * g.hy());

  SolveResult out;
  out.R = RealGrid(g);
  Eigen::ArrayXXd& R = out.R.values;
  R.col(0) = bc.south.array();
  R.col(ny - 1) = bc.north.array();
  R.row(0) = bc.west.array().transpose();
  R.row(nx - 1) = bc.east.array().transpose();
  // start from the bilinear blend of the edge data
  for (int j = 1; j < ny - 1; ++j)
    for (int i = 1; i < nx - 1; ++i) {
      const double s = double(i) / (nx - 1), t = double(j) / (ny - 1);
      R(i, j) = (1 - t) * R(i, 0) + t * R(i, ny - 1) + (1 - s) * R(0, j) + s * R(nx - 1, j) -
                ((1 - s) * (1 - t) * R(0, 0) + s * (1 - t) * R(nx - 1, 0) + (1 - s) * t * R(0, ny - 1) +
                 s * t * R(nx - 1, ny - 1));
    }

  out.residual = max_residual(R, c, ihx2, ihy2);
  double diag;
  while (out.residual > opt.tol && out.iterations < opt.max_iter) {
    for (int color = 0; color < 2; ++color)
      for (int j = 1; j < ny - 1; ++j)
        for (int i = 1 + (j + color) % 2; i < nx - 1; i += 2)
          R(i, j) += opt.relaxation * (gs_value(R, c, i, j, ihx2, ihy2, diag) - R(i, j));
    ++out.iterations;
    out.residual = max_residual(R, c, ihx2, ihy2);
  }
  out.converged = out.residual <= opt.tol;
  return out;
}

RealGrid r_equation_residual(const RealGrid& R, const RealGrid& omega) {
  if (!R.geom.same_as(omega.geom)) throw ParameterError("r_equation_residual: grid geometries differ");
  const GridGeometry& g = R.geom;
  const Coefficients c = coefficients(omega);
  const double ihx2 = 1 / (g.hx() * g.hx()), ihy2 = 1 / (g.hy() * g.hy());
  RealGrid out(g);
  mask_boundary(out);
  double diag;
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      out(i, j) = gs_value(R.values, c, i, j, ihx2, ihy2, diag) - R(i, j);
      out.mask(i, j) = R.mask(i, j) && omega.mask(i, j) && std::isfinite(out(i, j));
    }
  return out;
}

SReconstruction reconstruct_S(const RealGrid& R, const RealGrid& omega, int ai, int aj,
                              double anchor_value) {
  const GridGeometry& g = R.geom;
  if (!g.same_as(omega.geom)) throw ParameterError("reconstruct_S: grid geometries differ");
  if (ai < 0 || ai >= g.nx || aj < 0 || aj >= g.ny) throw ParameterError("reconstruct_S: anchor outside grid");

  const RealGrid Rx = fd::diff_x(R), Ry = fd::diff_y(R);
  RealGrid Sx(g), Sy(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double t = std::tanh(omega(i, j));
      Sx(i, j) = -Ry(i, j) / t;
      Sy(i, j) = t * Rx(i, j);
      Sx.mask(i, j) = Ry.mask(i, j) && omega.mask(i, j) && t != 0;
      Sy.mask(i, j) = Rx.mask(i, j) && omega.mask(i, j);
    }

  SReconstruction out{RealGrid(g), 0};
  RealGrid& S = out.S;
  const double hx = g.hx(), hy = g.hy();
  S(ai, aj) = anchor_value;
  for (int i = ai + 1; i < g.nx; ++i) S(i, aj) = S(i - 1, aj) + 0.5 * hx * (Sx(i - 1, aj) + Sx(i, aj));
  for (int i = ai - 1; i >= 0; --i) S(i, aj) = S(i + 1, aj) - 0.5 * hx * (Sx(i + 1, aj) + Sx(i, aj));
  for (int i = 0; i < g.nx; ++i) {
    for (int j = aj + 1; j < g.ny; ++j) S(i, j) = S(i, j - 1) + 0.5 * hy * (Sy(i, j - 1) + Sy(i, j));
    for (int j = aj - 1; j >= 0; --j) S(i, j) = S(i, j + 1) - 0.5 * hy * (Sy(i, j + 1) + Sy(i, j));
  }
  // a node is trusted only if its whole integration path is regular
  for (int i = 0; i < g.nx; ++i) {
    const int lo = std::min(i, ai), hi = std::max(i, ai);
    bool row_ok = true;
    for (int k = lo; k <= hi; ++k) row_ok = row_ok && Sx.mask(k, aj);
    for (int j = 0; j < g.ny; ++j) {
      bool ok = row_ok;
      for (int k = std::min(j, aj); k <= std::max(j, aj) && ok; ++k) ok = Sy.mask(i, k);
      S.mask(i, j) = ok;
    }
  }

  const RealGrid Sxy = fd::diff_y(Sx), Syx = fd::diff_x(Sy);
  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i)
      if (Sxy.mask(i, j) && Syx.mask(i, j))
        out.compatibility = std::max(out.compatibility, std::abs(Sxy(i, j) - Syx(i, j)));
  return out;
}

ComplexGrid beltrami_residual_field(const ComplexGrid& u, const RealGrid& omega) {
  if (!u.geom.same_as(omega.geom)) throw ParameterError("beltrami_residual: grid geometries differ");
  const fd::Wirtinger W = fd::wirtinger(u);
  ComplexGrid out(u.geom);
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i) {
      const double w = omega(i, j);
      out(i, j) = std::exp(w) * W.d_zbar(i, j) - std::exp(-w) * W.d_z(i, j);
      out.mask(i, j) = W.d_z.mask(i, j) && omega.mask(i, j) && std::isfinite(std::abs(out(i, j)));
    }
  mask_boundary(out);
  return out;
}

double beltrami_residual(const ComplexGrid& u, const RealGrid& omega) {
  return max_abs(beltrami_residual_field(u, omega));
}

}  // namespace hmap::beltrami
