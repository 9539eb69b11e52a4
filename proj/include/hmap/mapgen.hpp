#pragma once

// Closed-form harmonic map u = R + iS built on a one-soliton omega(Y), and the
// constant-curvature target metric it is harmonic for. With Z = X + iY the
// rotated coordinate,
//   R_X = alpha,  R_Y = -alpha sin(tau) cos(tau) / Phi,
//   S_X = 0,      S_Y =  alpha sinh(omega) cosh(omega) / Phi,
//   Phi = cos^2(tau) cosh^2(omega) + sin^2(tau) sinh^2(omega),
// and e^F = 4 Phi / (alpha^2 rho^2) along the map.

#include <complex>

#include "hmap/core.hpp"
#include "hmap/grid.hpp"
#include "hmap/soliton.hpp"

namespace hmap::mapgen {

using soliton::SolitonParams;

struct MapParams {
  SolitonParams soliton;
  double alpha = 1;
  double X0 = 0;
  double R0 = 0;
  double S0 = 0;

  // derived
  double sc = 0;        ///< sin(tau) cos(tau), snapped to 0 below rounding level
  double n = 0;         ///< 1/M
  double I0 = 0;        ///< phase integral at Y0
  double sigma0 = 0;    ///< Sigma at S0
  double scaleS = 0;    ///< dSigma/dS

  static MapParams make(const SolitonParams& s, double alpha, double X0 = 0, double R0 = 0,
                        double S0 = 0);
};

/// Target metric factor as a function of S, with its S-derivative of F = log e^F.
struct TargetMetric {
  double eF = 0;
  double dF_dS = 0;
  bool ok = true;
};

Flagged<double> map_S(double Y, const MapParams& mp);
double map_R(double X, double Y, const MapParams& mp);

/// Closed forms of the Y-derivatives in terms of omega' and omega''. Falls back
/// to the trigonometric form for K_N = 0, where the omega'-form is 0/0.
Flagged<double> dR_dY(double Y, const MapParams& mp);
Flagged<double> dS_dY(double Y, const MapParams& mp);

/// The same derivatives written with sinh/cosh of omega and tau.
Flagged<double> dR_dY_trig(double Y, const MapParams& mp);
Flagged<double> dS_dY_trig(double Y, const MapParams& mp);

/// Phi = cos^2 tau cosh^2 omega + sin^2 tau sinh^2 omega.
Flagged<double> phi_factor(double Y, const MapParams& mp);

/// e^F as a function of S (the target metric).
TargetMetric metric_density(double S, const MapParams& mp);

/// e^F = 4 Phi / (alpha^2 rho^2) evaluated through omega(Y).
Flagged<double> metric_density_omega(double Y, const MapParams& mp);

/// Specific coordinates for a constant lambda: zeta = exp(-lambda/2) z.
std::complex<double> specific_coords(std::complex<double> z, std::complex<double> lambda);

/// Value and first partials of u at one node of the zeta plane.
struct MapSample {
  double xi = 0, eta = 0;
  double X = 0, Y = 0;
  double R = 0, S = 0;
  double R_xi = 0, R_eta = 0;
  double S_xi = 0, S_eta = 0;
  double omega = 0;
  double eF = 0;
  bool regular = true;

  std::complex<double> u() const { return {R, S}; }
  /// u_zeta = (u_xi - i u_eta)/2.
  std::complex<double> u_zeta() const;
  std::complex<double> u_zetabar() const;
  double jacobian() const { return R_xi * S_eta - R_eta * S_xi; }
};

MapSample evaluate(std::complex<double> zeta, const MapParams& mp);

struct MapGrid {
  ComplexGrid u;
  RealGrid omega;
  RealGrid eF;
};

/// Samples u, omega and e^F on a grid in the zeta plane. Singular nodes are masked.
MapGrid sample_map(const MapParams& mp, const GridGeometry& g);

}  // namespace hmap::mapgen
