#pragma once

// Bäcklund transform between the elliptic sine-Gordon equation
//   theta_{zeta zetabar} = -1/2 sin 2 theta
// and the elliptic sinh-Gordon equation for a hyperbolic target
//   omega_{zeta zetabar} = 1/2 sinh 2 omega,
// related by
//   omega_xi  - theta_eta = -2 sinh(omega) sin(theta)
//   omega_eta + theta_xi  = -2 cosh(omega) cos(theta).
// For a general target e^F the right-hand sides are (1/2) tanh(omega) F_xi and
// (1/2) coth(omega) F_eta; that form is offered as a residual check only.
//
// Residuals use central differences of the given order (2 or 4) and are
// reported on nodes where the stencil is central (order/2 rings in).

#include <complex>
#include <string>
#include <vector>

#include "hmap/core.hpp"
#include "hmap/grid.hpp"

namespace hmap::backlund {

/// theta, omega and the residual fields of both first-order relations.
struct BacklundPair {
  RealGrid theta;
  RealGrid omega;
  RealGrid r1;  ///< omega_xi - theta_eta - rhs1
  RealGrid r2;  ///< omega_eta + theta_xi - rhs2
  double r1_max = 0;
  double r2_max = 0;
};

/// 1/4 Laplacian(theta) + 1/2 sin 2 theta.
RealGrid sine_gordon_residual_field(const RealGrid& theta, int order = 4);
double sine_gordon_residual(const RealGrid& theta, int order = 4);

/// 1/4 Laplacian(omega) - 1/2 sinh 2 omega.
RealGrid sinh_gordon_residual_field(const RealGrid& omega, int order = 4);
double sinh_gordon_residual(const RealGrid& omega, int order = 4);

/// Residuals of the hyperbolic pair relations. Throws ParameterError when the
/// grids differ.
BacklundPair backlund_pair(const RealGrid& theta, const RealGrid& omega, int order = 4);

struct PairResidual {
  double r1 = 0, r2 = 0;
};
PairResidual backlund_residual_hyperbolic(const RealGrid& theta, const RealGrid& omega, int order = 4);

/// General-target relations with F sampled on the same grid (F = F(u(zeta))).
BacklundPair backlund_residual_general(const RealGrid& theta, const RealGrid& omega, const RealGrid& F,
                                       int order = 4);

struct Seed {
  int i = 0, j = 0;
  double omega = 0;
};

struct IntegrateOptions {
  double consistency_tol = 1e-6;
  bool throw_on_inconsistency = true;
};

struct IntegrationResult {
  RealGrid omega;            ///< rows through the seed first, then columns
  RealGrid omega_alt;        ///< columns first, then rows
  double path_consistency = 0;  ///< max |omega - omega_alt|
  double sinh_gordon = 0;       ///< sinh_gordon_residual(omega)
};

/// Integrates omega from the seed with RK4 node to node: along the seed row using
/// omega_xi from the first relation, then along every column using omega_eta from
/// the second. theta derivatives are fourth-order differences, midpoint values
/// cubic interpolation. Throws DomainError when the two path orders disagree
/// by more than consistency_tol (theta is then not a sine-Gordon seed) or when
/// omega blows up.
IntegrationResult backlund_integrate(const RealGrid& theta, const Seed& seed, const IntegrateOptions& opt = {});

/// theta = sign * arcsin(tanh 2 xi).
double kink(double xi);
RealGrid kink_grid(const GridGeometry& g, int sign = 1);

/// Real branches of the closed-form omega:
///   A: 2 artanh(cosh 2xi / (2 eta)), real for eta > cosh(2 xi)/2
///   B: 2 artanh(2 eta / cosh 2xi),   real for |eta| < cosh(2 xi)/2
enum class Branch { A, B };
const char* to_string(Branch b);

Flagged<double> closed_form_omega(Branch b, double xi, double eta);
/// Throws DomainError when some node lies outside the branch's domain.
RealGrid closed_form_omega_grid(Branch b, const GridGeometry& g, int sign = 1);

/// One (branch, sign of omega, sign of theta) combination and its residuals.
struct Candidate {
  Branch branch = Branch::A;
  int omega_sign = 1;
  int theta_sign = 1;
  double sinh_gordon = 0;
  double r1 = 0, r2 = 0;
  bool pass = false;
};

struct BranchSelection {
  std::vector<Candidate> candidates;
  bool found = false;
  Candidate selected;
  double tolerance = 0;

  /// e.g. "A: omega = +2 artanh(cosh 2xi/(2 eta)), theta = -arcsin tanh 2xi"
  std::string label() const;
};

/// Determines which real branch applies on g (the grid must lie on one side of
/// eta = cosh(2 xi)/2) and which sign pairing of omega with the kink satisfies
/// both sinh-Gordon and the pair relations below tol. The kink itself is
/// preferred over the antikink, then +omega over -omega.
BranchSelection select_branch(const GridGeometry& g, double tol = 1e-5, int order = 4);

/// u = (eta^2 tanh 2xi + xi/2) + i (eta^2 / cosh 2xi - cosh 2xi / 4), harmonic into
/// the upper half-plane on eta > cosh(2 xi)/2. Throws DomainError listing the
/// nodes that violate the domain condition.
std::complex<double> example_u(double xi, double eta);
ComplexGrid backlund_example_map(const GridGeometry& g);

}  // namespace hmap::backlund
