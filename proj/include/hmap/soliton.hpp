#pragma once

// One-soliton solutions omega(Y) of the elliptic sinh-Gordon equation
//   omega'' = -(2 K_N / rho^2) sinh(2 omega)
// written through Jacobi elliptic functions.
//
// Three real branches are covered:
//   elliptic  C > 0, K_N = +-1: tanh omega = sn(v | 1/m) / sqrt(m),
//             v = eps sqrt(C m) (Y - Y0) + v0
//   linear    K_N = 0:          omega = omega0 + eps sqrt(C) (Y - Y0)
//   turning   C < 0, K_N = -1:  sinh omega = sigma / (sqrt(m - 1) cn(w | 1 - 1/m)),
//             w = sqrt(|C| m) (Y - Y0) + w0, sigma = sign(omega0)

#include <complex>
#include <vector>

#include "hmap/core.hpp"

namespace hmap::soliton {

enum class Branch { elliptic, linear, turning };

const char* to_string(Branch b);

struct SolitonParams {
  int kN = 1;
  double rho = 1;
  double tau = 0;
  double Y0 = 0;
  double omega0 = 0;
  double domega0 = 1;
  int eps = 1;  ///< branch sign; equals sign(domega0) whenever domega0 != 0

  // derived
  Branch branch = Branch::elliptic;
  double C = 0;
  double m = 0;
  double M = 0;
  double ell = 0;    ///< parameter passed to the elliptic functions
  double rate = 0;   ///< |d phase / dY|
  double v0 = 0;     ///< phase at Y0
  double sigma = 1;  ///< sign(omega0), turning branch only
  double K = 0;      ///< K(ell) when ell < 1, otherwise K(1/ell)

  /// Validates and fills the derived constants. eps = 0 selects sign(domega0).
  static SolitonParams make(int kN, double rho, double tau, double Y0, double omega0,
                            double domega0, int eps = 0);

  /// Elliptic phase v (or w) at Y.
  double phase(double Y) const;
};

std::complex<double> rotate_coords(std::complex<double> zeta, const SolitonParams& p);
std::complex<double> unrotate_coords(std::complex<double> Z, const SolitonParams& p);

Flagged<double> omega(double Y, const SolitonParams& p);
Flagged<double> omega_prime(double Y, const SolitonParams& p);
Flagged<double> omega_second(double Y, const SolitonParams& p);

struct SinhCosh {
  double sinh = 0;
  double cosh = 1;
  bool pole = false;
  bool ok() const { return !pole; }
};

/// sinh and cosh of omega straight from the Jacobi quotients.
SinhCosh sinh_cosh_omega(double Y, const SolitonParams& p);

/// (omega'/sqrt C)^2 + (m - 1) sinh^2 omega - 1; zero along every trajectory.
double first_integral_defect(double Y, const SolitonParams& p);

/// max |omega''_FD + (2 K_N / rho^2) sinh 2 omega| over the samples, second-order
/// central differences with step h. Samples whose stencil touches a pole are skipped.
double sinh_gordon_residual(const SolitonParams& p, const std::vector<double>& Ys,
                            double h = 1e-4);

}  // namespace hmap::soliton
