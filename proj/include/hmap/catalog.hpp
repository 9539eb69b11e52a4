#pragma once

// Explicit harmonic maps between constant curvature surfaces, each built by a
// path independent of the one-soliton closed forms (ODE shooting, quadrature,
// root finding) so the two can be compared.
//
//   Wolf          u = y + i t arctan(sinh u(x)),  u'' = sinh(2u) / (2 t^2)
//   half-cylinder u = x + i v_c(y),               v v'' - v'^2 + 1 = 0
//   strip (STW)   u = alpha x + h(y) + i g(y),    cot g = w2 cs(alpha w2 y | 1 - w1^2/w2^2)
//   Li-Tam        u = x + (i/a) sinh(a y),        omega = -log tanh xi

#include <complex>
#include <vector>

#include "hmap/grid.hpp"
#include "hmap/mapgen.hpp"
#include "hmap/verify.hpp"

namespace hmap::catalog {

using cplx = std::complex<double>;

// ---------------------------------------------------------------- Wolf

/// RK4 trajectory of u'' = sinh(2u)/(2t^2), u(0) = 0, u(1) = arccosh t.
struct WolfSolution {
  double t = 2;
  double du0 = 0;              ///< shooting result u'(0)
  double c0 = 0;               ///< (t u')^2 - sinh^2 u - 1/2 at x = 0
  double boundary_error = 0;   ///< |u(1) - arccosh t|
  double first_integral_drift = 0;  ///< max - min of c0 along the trajectory
  int shooting_iterations = 0;
  std::vector<double> x, u, du;  ///< uniform nodes on [0, 1]

  /// Cubic Hermite interpolation of the trajectory; x must lie in [0, 1].
  double u_at(double x) const;
  double du_at(double x) const;
  /// (c0 - 1/2) / (4 t^2).
  double hopf_constant() const;
};

/// Solves the two-point problem by secant shooting on u'(0). n_nodes is the
/// number of RK4 nodes on [0, 1]; at least 10001 so the step is <= 1e-4.
/// Throws ParameterError for t <= 1 or when the shooting bracket fails.
WolfSolution wolf_solve(double t, int n_nodes = 10001, double tol = 1e-12);

/// u(x, y) = y + i t arctan(sinh u(x)) on a grid with x in [0, 1].
ComplexGrid wolf_map(const WolfSolution& sol, const GridGeometry& g);

/// The same map as a one-soliton with K_N = -1, rho = 1, tau = -pi/2,
/// omega0' = 0 and alpha = -2t / sqrt(c0 - 1/2).
mapgen::MapParams wolf_as_soliton(double t, double c0);

/// zeta = sqrt(Lambda) z, with Lambda the Hopf constant; then X = -eta, Y = xi.
cplx wolf_specific_coords(cplx z, double t, double c0);

// ---------------------------------------------------------- half-cylinder

struct HalfCylinder {
  double c = 1;

  static HalfCylinder make(double c);

  /// v_c(y) = sinh(sqrt(c)(y - 1) + asinh(sqrt c)) / sqrt(c).
  double v(double y) const;
  double dv(double y) const;
  double d2v(double y) const;
  /// v v'' - v'^2 + 1.
  double ode_residual(double y) const;
  /// Beltrami coefficient (1 - v')/(1 + v'); negative for y > 1 - asinh(sqrt c)/sqrt c.
  double mu(double y) const;
  double omega(double y) const { return -0.5 * std::log(std::abs(mu(y))); }
  double hopf_constant() const { return -c / 4; }
};

/// u = x + i v_c(y), harmonic for the metric 1/S^2. Throws DomainError for y < 1.
ComplexGrid half_cylinder_map(double c, const GridGeometry& g);

// ------------------------------------------------------------- STW strip

struct STWParams {
  double alpha = 1;
  double a = 1;
  double b = 1;

  // derived
  double c2 = 0;   ///< alpha^2 + b^2 + a^4
  double w1 = 0, w2 = 0;
  double ell = 0;  ///< 1 - w1^2/w2^2
  // soliton-equivalent constants (K_N = -1, X = x, Y = y, Y0 = pi/2)
  double rho = 0;
  double tan_tau = 0;
  double tau = 0;
  double C = 0;
  double M = 0;
  double m = 0;
  double omega0 = 0;  ///< atanh(w1/w2), where omega'(pi/2) = 0

  /// Throws ParameterError for alpha <= 0 or b <= 0.
  static STWParams make(double alpha, double a, double b);

  /// Locates b in [b_lo, b_hi] with stw_quarter_period_condition(alpha, a, b) = 0.
  /// The condition decreases monotonically in b; at alpha = a = 1 the root is
  /// near 0.879 and the default bracket holds it.
  static STWParams solve(double alpha, double a, double b_lo = 0.05, double b_hi = 3.0,
                         double tol = 1e-13);
};

/// K(1 - w1^2/w2^2) - alpha w2 pi/2.
double stw_quarter_period_condition(double alpha, double a, double b);

/// g(y) = arccot(w2 cs(alpha w2 y | ell)) in (0, pi) for y in (0, pi).
double stw_S(double y, const STWParams& p);
/// Derivative of the arccot form.
double stw_dS_dy(double y, const STWParams& p);
/// alpha w2^2 dn / (w2^2 + (1 - w2^2) sn^2).
double stw_dS_dy_dn(double y, const STWParams& p);
/// h'(y) = a^2 sin^2 S.
double stw_dh_dy(double y, const STWParams& p);
/// h(y) = int_{pi/2}^{y} h'(s) ds by composite Simpson, step <= 1e-3.
double stw_h(double y, const STWParams& p);
/// tanh omega = dn(alpha w2 y | ell).
double stw_tanh_omega(double y, const STWParams& p);

/// u = alpha x + h(y) + i S(y). Requires the quarter-period condition to 1e-8
/// (ParameterError) and every y in the open interval (0, pi) (DomainError).
ComplexGrid stw_map(const STWParams& p, const GridGeometry& g);

// ---------------------------------------------------------------- Li-Tam

enum class LiTamForm {
  z,     ///< u = x + (i/a) sinh(a y), y > 0, metric 1/S^2 on S > 0
  zeta,  ///< u = 2 eta/a - (i/a) sinh(2 xi), xi > 0, metric 1/S^2 on S < 0
};

cplx litam_u(double a, cplx z, LiTamForm form);
double litam_omega(double xi);
ComplexGrid litam_map(double a, const GridGeometry& g, LiTamForm form);
verify::MetricSpec litam_metric(LiTamForm form);

// ----------------------------------------------------------- one-soliton

/// Target metric e^F(S) of a one-soliton map, with F_u = -(i/2) dF/dS.
/// Evaluation off the metric's domain throws DomainError.
verify::MetricSpec soliton_metric(const mapgen::MapParams& mp);

}  // namespace hmap::catalog
