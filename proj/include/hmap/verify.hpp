#pragma once

// Finite-difference checks of the pointwise identities satisfied by a harmonic
// diffeomorphism u: (Omega, |dz|^2) -> (N, e^F |du|^2):
//   harmonicity     u_{z zbar} + F_u(u) u_z u_zbar = 0
//   Hopf            Lambda = e^F u_z conj(u_zbar) holomorphic
//   Beltrami        u_zbar / u_z = e^{-2 omega + i phi}, phi harmonic
//   metric          e^F = e^{-psi} / (|u_z| |u_zbar|) when Lambda = e^{-lambda}
// All derivatives are second-order central differences. Edge nodes use
// one-sided stencils, so each residual is reported only where its whole
// dependency chain is central: one ring in from the edge for first-level
// identities, two for derivatives of derived fields (Hopf holomorphy, phi
// harmonicity, sampled metrics), three for pulled-back curvature.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmap/fd.hpp"
#include "hmap/grid.hpp"

namespace hmap::verify {

using cplx = std::complex<double>;

enum class MetricKind {
  flat,
  upper_half_plane,  ///< 1/S^2 on S > 0
  lower_half_plane,  ///< 1/S^2 on S < 0
  sphere,            ///< 4/(1 + |u|^2)^2
  cylinder,          ///< 1/(t^2 cos^2(S/t)) on |S| < pi t / 2
  strip,             ///< 1/sin^2 S on 0 < S < pi
  closed_form,       ///< user-supplied e^F(u) and F_u(u)
  sampled,           ///< F pulled back to the domain grid
};

/// Target metric e^F |du|^2.
struct MetricSpec {
  MetricKind kind = MetricKind::flat;
  std::string name = "flat";
  double t = 1;             ///< cylinder width parameter
  double curvature = 0;     ///< K_N; NaN when not constant
  std::function<double(cplx)> eF_fn;  ///< closed_form only
  std::function<cplx(cplx)> Fu_fn;    ///< closed_form only
  RealGrid F;                         ///< sampled only: F(u(z)) on the domain grid

  static MetricSpec flat();
  static MetricSpec upper_half_plane();
  static MetricSpec lower_half_plane();
  static MetricSpec sphere();
  static MetricSpec cylinder(double t);
  static MetricSpec strip();
  static MetricSpec closed_form(std::string name, double curvature, std::function<double(cplx)> eF,
                                std::function<cplx(cplx)> Fu);
  static MetricSpec sampled(RealGrid F, double curvature = std::numeric_limits<double>::quiet_NaN());

  /// Closed-form kinds only. Throws DomainError outside the metric's domain.
  double eF(cplx u) const;
  cplx F_u(cplx u) const;
};

/// e^F and F_u along the map, one value per domain node.
struct MetricAlong {
  RealGrid eF;
  ComplexGrid F_u;
};

/// Evaluates the metric at u(z). Nodes outside the metric's domain raise a
/// DomainError listing them. For a sampled metric F_u is recovered from F_z by
/// the chain rule F_z = F_u u_z + conj(F_u) conj(u_zbar), which needs J != 0.
MetricAlong metric_along(const MetricSpec& metric, const ComplexGrid& u, const fd::Wirtinger& W);

ComplexGrid harmonic_residual_field(const ComplexGrid& u, const MetricSpec& metric);
double harmonic_residual(const ComplexGrid& u, const MetricSpec& metric);

struct HopfField {
  ComplexGrid Lambda;
  double holomorphy = 0;  ///< max |d Lambda / d zbar|, two rings from the edge
  cplx mean{};
  double std = 0;
  double min_abs = 0;     ///< the Hopf differential must not vanish
};

HopfField hopf_field(const ComplexGrid& u, const MetricSpec& metric);

struct Decomposition {
  RealGrid omega;          ///< -1/2 log |mu|
  RealGrid phi;            ///< arg mu, unwrapped along rows, then a column seam pass
  double phi_harmonicity = 0;
  bool degenerate = false; ///< some node has mu = 0 (conformal there); masked
};

/// mu = u_zbar / u_z. Throws DomainError where u_z vanishes.
Decomposition beltrami_decompose(const ComplexGrid& u);

/// K = -1/2 e^{-F} Laplacian(F), for F given in its own coordinates.
RealGrid curvature_from_metric(const RealGrid& F);

/// Curvature of e^F |du|^2 when F is sampled along u on the domain grid:
/// F_{u ubar} comes from two chain-rule solves, K = -2 e^{-F} F_{u ubar}.
RealGrid pulled_back_curvature(const ComplexGrid& u, const RealGrid& F);

struct Reconstruction {
  RealGrid eF;               ///< e^{-psi} / (|u_z| |u_zbar|)
  RealGrid K;                ///< pulled-back curvature of eF
  RealGrid K_formula;        ///< -(2 omega_{z zbar} / sinh 2 omega) e^{psi}
  double harmonic = 0;       ///< harmonic residual of u against eF
  double formula_dev = 0;    ///< max |K - K_formula|
};

/// Builds the target metric for which u is harmonic, given the constant lambda
/// with Lambda = e^{-lambda}. Throws DomainError if the decomposition is
/// degenerate; phi harmonicity is the caller's precondition.
Reconstruction reconstruct_metric(const ComplexGrid& u, cplx lambda);

struct JacobianField {
  RealGrid J;          ///< e^{F - f} (|u_z|^2 - |u_zbar|^2)
  RealGrid norm_10;    ///< e^{F - f} |u_z|^2
  RealGrid norm_01;    ///< e^{F - f} |u_zbar|^2
  double min_abs = 0;
  bool orientation_consistent = true;
};

/// f is the domain conformal factor; nullptr means the Euclidean domain.
JacobianField jacobian_and_norms(const ComplexGrid& u, const MetricSpec& metric, const RealGrid* f = nullptr);

/// Max cosine of the angle between u_xi and u_eta in specific coordinates
/// zeta = e^{-lambda/2} z; zero for a harmonic map with real positive mu there.
double orthogonality(const ComplexGrid& u, cplx lambda);

/// |e^{omega} u_zetabar - e^{-omega} u_zeta| in specific coordinates, interior nodes.
RealGrid beltrami_residual_specific_field(const ComplexGrid& u, const RealGrid& omega, cplx lambda);
/// Its maximum.
double beltrami_residual_specific(const ComplexGrid& u, const RealGrid& omega, cplx lambda);

/// max(1e-8, 10 h^2) with h the larger spacing.
double default_tolerance(const GridGeometry& g);

struct Expectations {
  std::optional<double> curvature;       ///< defaults to the metric's
  std::optional<cplx> hopf_constant;     ///< Lambda claimed constant
  std::optional<RealGrid> omega;         ///< expected omega in specific coordinates
};

struct Tolerances {
  double harmonic = 0;      ///< 0 selects default_tolerance
  double beltrami = 0;
  double hopf = 0;
  double hopf_std = 1e-6;
  double curvature = 1e-3;
  double orthogonality = 0;
  double phi = 0;
};

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool pass = false;
};

struct VerificationReport {
  double harmonic_max = 0;
  double beltrami_max = 0;
  double hopf_holomorphy_max = 0;
  double hopf_std = 0;
  double curvature_dev_max = 0;
  double jacobian_min = 0;
  double orthogonality_max = 0;
  double phi_harmonicity_max = 0;

  // supporting values
  cplx hopf_mean{};
  double hopf_min_abs = 0;
  double curvature_formula_dev = 0;
  double reconstructed_harmonic_max = 0;
  double metric_ratio_dev = 0;  ///< max |reconstructed e^F / e^F - 1|
  cplx lambda{};
  double expected_curvature = 0;
  bool orientation_consistent = true;

  GridGeometry grid;
  std::string metric_name;
  std::vector<Check> checks;

  bool passed() const;
};

VerificationReport verify_map(const ComplexGrid& u, const MetricSpec& metric, const Expectations& expect = {},
                              const Tolerances& tol = {});

}  // namespace hmap::verify
