#pragma once

// Real-coefficient Beltrami equation e^{omega} u_zbar = e^{-omega} u_z on a
// rectangle. With u = R + iS it splits into
//   S_eta = tanh(omega) R_xi,   S_xi = -coth(omega) R_eta,
// so R solves the divergence-form equation
//   (tanh(omega) R_xi)_xi + (coth(omega) R_eta)_eta = 0
// and S follows by quadrature.

#include <Eigen/Core>

#include "hmap/grid.hpp"

namespace hmap::beltrami {

/// Dirichlet values of R on the four edges. south/north run along x (size nx,
/// rows j = 0 and j = ny - 1); west/east run along y (size ny).
struct BoundaryData {
  Eigen::VectorXd south, north, west, east;

  template <class Fn>
  static BoundaryData from_function(const GridGeometry& g, Fn&& f) {
    BoundaryData bc{Eigen::VectorXd(g.nx), Eigen::VectorXd(g.nx), Eigen::VectorXd(g.ny),
                    Eigen::VectorXd(g.ny)};
    for (int i = 0; i < g.nx; ++i) {
      bc.south(i) = f(g.x(i), g.y(0));
      bc.north(i) = f(g.x(i), g.y(g.ny - 1));
    }
    for (int j = 0; j < g.ny; ++j) {
      bc.west(j) = f(g.x(0), g.y(j));
      bc.east(j) = f(g.x(g.nx - 1), g.y(j));
    }
    return bc;
  }

  static BoundaryData from_grid(const RealGrid& R);

  /// Throws ParameterError when the edge arrays do not match g.
  void validate(const GridGeometry& g) const;
};

struct SolveOptions {
  double tol = 1e-10;        ///< max-norm of the diagonally scaled residual
  int max_iter = 100000;     ///< red-black sweeps
  double relaxation = 1.9;
  double omega_floor = 1e-3;
};

struct SolveResult {
  RealGrid R;
  bool converged = false;
  int iterations = 0;
  double residual = 0;
};

/// Red-black SOR on the 5-point flux-form stencil; tanh and coth are averaged
/// onto half-nodes. Throws DomainError when omega is masked anywhere, changes
/// sign, or comes within omega_floor of 0. Returns the last iterate with
/// converged = false when max_iter is exhausted.
SolveResult solve_R(const RealGrid& omega, const BoundaryData& bc, const SolveOptions& opt = {});

/// Diagonally scaled residual of the discrete R-equation, interior nodes only.
RealGrid r_equation_residual(const RealGrid& R, const RealGrid& omega);

struct SReconstruction {
  RealGrid S;
  double compatibility = 0;  ///< max |(S_xi)_eta - (S_eta)_xi| on interior nodes
};

/// Integrates S_xi = -coth(omega) R_eta along row aj from the anchor, then
/// S_eta = tanh(omega) R_xi up and down each column (trapezoid rule).
SReconstruction reconstruct_S(const RealGrid& R, const RealGrid& omega, int ai, int aj,
                              double anchor_value);

/// Pointwise e^{omega} u_zbar - e^{-omega} u_z with central differences;
/// boundary nodes are masked.
ComplexGrid beltrami_residual_field(const ComplexGrid& u, const RealGrid& omega);

/// Max-norm of beltrami_residual_field.
double beltrami_residual(const ComplexGrid& u, const RealGrid& omega);

}  // namespace hmap::beltrami
