#include "hmap/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

namespace hmap::verify {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
const cplx I(0, 1);

// Clear the mask on the outer k rings.
template <class Scalar>
void mask_rings(FieldGrid<Scalar>& f, int k) {
  for (int r = 0; r < k; ++r) {
    f.mask.row(r).setConstant(false);
    f.mask.row(f.nx() - 1 - r).setConstant(false);
    f.mask.col(r).setConstant(false);
    f.mask.col(f.ny() - 1 - r).setConstant(false);
  }
}

std::string node_list(const std::vector<std::pair<int, int>>& nodes) {
  std::ostringstream os;
  const std::size_t shown = std::min<std::size_t>(nodes.size(), 8);
  for (std::size_t k = 0; k < shown; ++k) os << (k ? ", " : "") << "(" << nodes[k].first << ", " << nodes[k].second << ")";
  if (nodes.size() > shown) os << " and " << nodes.size() - shown << " more";
  return os.str();
}

// J0 = |u_z|^2 - |u_zbar|^2
inline double det0(cplx uz, cplx uzb) { return std::norm(uz) - std::norm(uzb); }

// a with a u_z + conj(a) conj(u_zbar) = g_z, a u_zbar + conj(a) conj(u_z) = g_zbar
inline cplx chain_solve(cplx uz, cplx uzb, cplx gz, cplx gzb) {
  return (gz * std::conj(uz) - std::conj(uzb) * gzb) / det0(uz, uzb);
}

RealGrid log_grid(const RealGrid& eF) {
  RealGrid F(eF.geom);
  F.values = eF.values.log();
  F.mask = eF.mask && (eF.values > 0);
  return F;
}

}  // namespace

MetricSpec MetricSpec::flat() { return {}; }

MetricSpec MetricSpec::upper_half_plane() {
  MetricSpec m;
  m.kind = MetricKind::upper_half_plane;
  m.name = "upper-half-plane";
  m.curvature = -1;
  return m;
}

MetricSpec MetricSpec::lower_half_plane() {
  MetricSpec m = upper_half_plane();
  m.kind = MetricKind::lower_half_plane;
  m.name = "lower-half-plane";
  return m;
}

MetricSpec MetricSpec::sphere() {
  MetricSpec m;
  m.kind = MetricKind::sphere;
  m.name = "sphere";
  m.curvature = 1;
  return m;
}

MetricSpec MetricSpec::cylinder(double t) {
  if (!(t > 0)) throw ParameterError("cylinder metric: t must be positive");
  MetricSpec m;
  m.kind = MetricKind::cylinder;
  m.name = "cylinder";
  m.t = t;
  m.curvature = -1;
  return m;
}

MetricSpec MetricSpec::strip() {
  MetricSpec m;
  m.kind = MetricKind::strip;
  m.name = "strip";
  m.curvature = -1;
  return m;
}

MetricSpec MetricSpec::closed_form(std::string name, double curvature, std::function<double(cplx)> eF,
                                   std::function<cplx(cplx)> Fu) {
  MetricSpec m;
  m.kind = MetricKind::closed_form;
  m.name = std::move(name);
  m.curvature = curvature;
  m.eF_fn = std::move(eF);
  m.Fu_fn = std::move(Fu);
  return m;
}

MetricSpec MetricSpec::sampled(RealGrid F, double curvature) {
  MetricSpec m;
  m.kind = MetricKind::sampled;
  m.name = "sampled";
  m.curvature = curvature;
  m.F = std::move(F);
  return m;
}

double MetricSpec::eF(cplx u) const {
  const double S = u.imag();
  switch (kind) {
    case MetricKind::flat:
      return 1;
    case MetricKind::upper_half_plane:
      if (!(S > 0)) throw DomainError("upper half-plane metric needs S > 0");
      return 1 / (S * S);
    case MetricKind::lower_half_plane:
      if (!(S < 0)) throw DomainError("lower half-plane metric needs S < 0");
      return 1 / (S * S);
    case MetricKind::sphere: {
      const double d = 1 + std::norm(u);
      return 4 / (d * d);
    }
    case MetricKind::cylinder: {
      const double c = std::cos(S / t);
      if (!(std::abs(S / t) < std::numbers::pi / 2)) throw DomainError("cylinder metric needs |S| < pi t / 2");
      return 1 / (t * t * c * c);
    }
    case MetricKind::strip: {
      if (!(S > 0 && S < std::numbers::pi)) throw DomainError("strip metric needs 0 < S < pi");
      const double s = std::sin(S);
      return 1 / (s * s);
    }
    case MetricKind::closed_form: {
      const double v = eF_fn(u);
      if (!(v > 0) || !std::isfinite(v)) throw DomainError("metric " + name + " is not positive at u");
      return v;
    }
    case MetricKind::sampled:
      break;
  }
  throw ParameterError("sampled metric has no pointwise evaluation");
}

cplx MetricSpec::F_u(cplx u) const {
  const double S = u.imag();
  switch (kind) {
    case MetricKind::flat:
      return 0;
    case MetricKind::upper_half_plane:
    case MetricKind::lower_half_plane:
      eF(u);
      return I / S;
    case MetricKind::sphere:
      return -2.0 * std::conj(u) / (1 + std::norm(u));
    case MetricKind::cylinder:
      eF(u);
      return -I / t * std::tan(S / t);
    case MetricKind::strip:
      eF(u);
      return I / std::tan(S);
    case MetricKind::closed_form:
      return Fu_fn(u);
    case MetricKind::sampled:
      break;
  }
  throw ParameterError("sampled metric has no pointwise evaluation");
}

MetricAlong metric_along(const MetricSpec& metric, const ComplexGrid& u, const fd::Wirtinger& W) {
  const GridGeometry& g = u.geom;
  MetricAlong out{RealGrid(g), ComplexGrid(g)};
  if (metric.kind == MetricKind::sampled) {
    if (!metric.F.geom.same_as(g)) throw ParameterError("sampled metric grid differs from the map grid");
    const fd::Wirtinger WF = fd::wirtinger(metric.F);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        out.eF(i, j) = std::exp(metric.F(i, j));
        out.F_u(i, j) = chain_solve(W.d_z(i, j), W.d_zbar(i, j), WF.d_z(i, j), WF.d_zbar(i, j));
        out.eF.mask(i, j) = metric.F.mask(i, j) && u.mask(i, j);
        out.F_u.mask(i, j) = WF.d_z.mask(i, j) && W.d_z.mask(i, j) && std::isfinite(std::abs(out.F_u(i, j)));
      }
    return out;
  }
  std::vector<std::pair<int, int>> bad;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!u.mask(i, j)) {
        out.eF.mask(i, j) = out.F_u.mask(i, j) = false;
        continue;
      }
      try {
        out.eF(i, j) = metric.eF(u(i, j));
        out.F_u(i, j) = metric.F_u(u(i, j));
      } catch (const DomainError&) {
        bad.emplace_back(i, j);
      }
    }
  if (!bad.empty())
    throw DomainError("map leaves the domain of the " + metric.name + " metric at nodes " + node_list(bad));
  return out;
}

ComplexGrid harmonic_residual_field(const ComplexGrid& u, const MetricSpec& metric) {
  const fd::Wirtinger W = fd::wirtinger(u);
  const MetricAlong m = metric_along(metric, u, W);
  ComplexGrid out = fd::d_zzbar(u);
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i) {
      out(i, j) += m.F_u(i, j) * W.d_z(i, j) * W.d_zbar(i, j);
      out.mask(i, j) = out.mask(i, j) && m.F_u.mask(i, j) && W.d_z.mask(i, j);
    }
  mask_rings(out, metric.kind == MetricKind::sampled ? 2 : 1);
  return out;
}

double harmonic_residual(const ComplexGrid& u, const MetricSpec& metric) {
  return max_abs(harmonic_residual_field(u, metric));
}

HopfField hopf_field(const ComplexGrid& u, const MetricSpec& metric) {
  const fd::Wirtinger W = fd::wirtinger(u);
  const MetricAlong m = metric_along(metric, u, W);
  HopfField h{ComplexGrid(u.geom)};
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i) {
      h.Lambda(i, j) = m.eF(i, j) * W.d_z(i, j) * std::conj(W.d_zbar(i, j));
      h.Lambda.mask(i, j) = m.eF.mask(i, j) && W.d_z.mask(i, j);
    }
  const fd::Wirtinger WL = fd::wirtinger(h.Lambda);
  ComplexGrid dzb = WL.d_zbar;
  mask_rings(dzb, 2);
  h.holomorphy = max_abs(dzb);

  ComplexGrid inner = h.Lambda;
  mask_boundary(inner);
  std::tie(h.mean, h.std) = mean_std(inner);
  h.min_abs = std::numeric_limits<double>::infinity();
  for (int j = 0; j < u.ny(); ++j)
    for (int i = 0; i < u.nx(); ++i)
      if (inner.mask(i, j)) h.min_abs = std::min(h.min_abs, std::abs(inner(i, j)));
  return h;
}

Decomposition beltrami_decompose(const ComplexGrid& u) {
  const GridGeometry& g = u.geom;
  const fd::Wirtinger W = fd::wirtinger(u);
  Decomposition d{RealGrid(g), RealGrid(g)};
  std::vector<std::pair<int, int>> critical;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const bool ok = W.d_z.mask(i, j);
      d.omega.mask(i, j) = d.phi.mask(i, j) = ok;
      if (!ok) continue;
      if (W.d_z(i, j) == 0.0) {
        critical.emplace_back(i, j);
        continue;
      }
      const cplx mu = W.d_zbar(i, j) / W.d_z(i, j);
      if (std::abs(mu) < 1e-12) {
        d.degenerate = true;
        d.omega.mask(i, j) = d.phi.mask(i, j) = false;
        continue;
      }
      d.omega(i, j) = -0.5 * std::log(std::abs(mu));
      d.phi(i, j) = std::arg(mu);
    }
  if (!critical.empty()) throw DomainError("u_z vanishes (critical point) at nodes " + node_list(critical));

  // unwrap along each row, then shift rows so the first column is continuous
  const double two_pi = 2 * std::numbers::pi;
  auto wrap = [&](double delta) { return delta - two_pi * std::round(delta / two_pi); };
  for (int j = 0; j < g.ny; ++j) {
    int prev = -1;
    for (int i = 0; i < g.nx; ++i) {
      if (!d.phi.mask(i, j)) continue;
      if (prev >= 0) d.phi(i, j) = d.phi(prev, j) + wrap(d.phi(i, j) - d.phi(prev, j));
      prev = i;
    }
  }
  int prev = -1;
  for (int j = 0; j < g.ny; ++j) {
    if (!d.phi.mask(0, j)) continue;
    if (prev >= 0) {
      const double shift = d.phi(0, prev) + wrap(d.phi(0, j) - d.phi(0, prev)) - d.phi(0, j);
      d.phi.values.col(j) += shift;
    }
    prev = j;
  }
  RealGrid lap = fd::laplacian(d.phi);
  mask_rings(lap, 2);
  d.phi_harmonicity = max_abs(lap);
  return d;
}

RealGrid curvature_from_metric(const RealGrid& F) {
  RealGrid K = fd::laplacian(F);
  K.values = -0.5 * (-F.values).exp() * K.values;
  return K;
}

RealGrid pulled_back_curvature(const ComplexGrid& u, const RealGrid& F) {
  const GridGeometry& g = u.geom;
  const fd::Wirtinger W = fd::wirtinger(u);
  const MetricAlong m = metric_along(MetricSpec::sampled(F), u, W);
  const fd::Wirtinger WG = fd::wirtinger(m.F_u);
  RealGrid K(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      // G = F_u: G_z = F_uu u_z + F_uubar conj(u_zbar), G_zbar = F_uu u_zbar + F_uubar conj(u_z)
      const cplx uz = W.d_z(i, j), uzb = W.d_zbar(i, j);
      const cplx q = (uz * WG.d_zbar(i, j) - uzb * WG.d_z(i, j)) / det0(uz, uzb);
      K(i, j) = -2 * std::exp(-F(i, j)) * q.real();
      K.mask(i, j) = WG.d_z.mask(i, j) && F.mask(i, j) && std::isfinite(K(i, j));
    }
  mask_rings(K, 3);
  return K;
}

Reconstruction reconstruct_metric(const ComplexGrid& u, cplx lambda) {
  const GridGeometry& g = u.geom;
  const Decomposition d = beltrami_decompose(u);
  if (d.degenerate) throw DomainError("reconstruct_metric: Beltrami coefficient vanishes (u is conformal somewhere)");
  const fd::Wirtinger W = fd::wirtinger(u);
  const double psi = lambda.real();
  Reconstruction r{RealGrid(g), RealGrid(g), RealGrid(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      r.eF(i, j) = std::exp(-psi) / (std::abs(W.d_z(i, j)) * std::abs(W.d_zbar(i, j)));
      r.eF.mask(i, j) = W.d_z.mask(i, j) && std::isfinite(r.eF(i, j));
    }
  const RealGrid F = log_grid(r.eF);
  r.K = pulled_back_curvature(u, F);

  RealGrid lap = fd::laplacian(d.omega);
  mask_rings(lap, 2);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      r.K_formula(i, j) = -2 * (0.25 * lap(i, j)) / std::sinh(2 * d.omega(i, j)) * std::exp(psi);
      r.K_formula.mask(i, j) = lap.mask(i, j) && std::isfinite(r.K_formula(i, j));
    }
  r.formula_dev = max_abs(difference(r.K, r.K_formula));
  r.harmonic = harmonic_residual(u, MetricSpec::sampled(F));
  return r;
}

JacobianField jacobian_and_norms(const ComplexGrid& u, const MetricSpec& metric, const RealGrid* f) {
  const GridGeometry& g = u.geom;
  if (f && !f->geom.same_as(g)) throw ParameterError("domain factor grid differs from the map grid");
  const fd::Wirtinger W = fd::wirtinger(u);
  const MetricAlong m = metric_along(metric, u, W);
  JacobianField out{RealGrid(g), RealGrid(g), RealGrid(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double scale = m.eF(i, j) * (f ? std::exp(-(*f)(i, j)) : 1.0);
      out.norm_10(i, j) = scale * std::norm(W.d_z(i, j));
      out.norm_01(i, j) = scale * std::norm(W.d_zbar(i, j));
      out.J(i, j) = out.norm_10(i, j) - out.norm_01(i, j);
      const bool ok = m.eF.mask(i, j) && W.d_z.mask(i, j) && (!f || f->mask(i, j));
      out.J.mask(i, j) = out.norm_10.mask(i, j) = out.norm_01.mask(i, j) = ok;
    }
  out.min_abs = std::numeric_limits<double>::infinity();
  int sign = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!out.J.mask(i, j)) continue;
      const double v = out.J(i, j);
      out.min_abs = std::min(out.min_abs, std::abs(v));
      const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (sign == 0) sign = s;
      if (s == 0 || s != sign) out.orientation_consistent = false;
    }
  return out;
}

double orthogonality(const ComplexGrid& u, cplx lambda) {
  const fd::Wirtinger W = fd::wirtinger(u);
  const cplx a = std::exp(0.5 * lambda), b = std::exp(0.5 * std::conj(lambda));
  double worst = 0;
  for (int j = 1; j < u.ny() - 1; ++j)
    for (int i = 1; i < u.nx() - 1; ++i) {
      if (!W.d_z.mask(i, j)) continue;
      const cplx uz = a * W.d_z(i, j), uzb = b * W.d_zbar(i, j);
      const cplx ux = uz + uzb, uy = I * (uz - uzb);
      const double c = std::abs((ux * std::conj(uy)).real()) / (std::abs(ux) * std::abs(uy));
      if (std::isfinite(c)) worst = std::max(worst, c);
    }
  return worst;
}

RealGrid beltrami_residual_specific_field(const ComplexGrid& u, const RealGrid& omega, cplx lambda) {
  if (!omega.geom.same_as(u.geom)) throw ParameterError("beltrami_residual: grid geometries differ");
  const fd::Wirtinger W = fd::wirtinger(u);
  const cplx a = std::exp(0.5 * lambda), b = std::exp(0.5 * std::conj(lambda));
  RealGrid out(u.geom);
  out.mask = W.d_z.mask && omega.mask;
  mask_boundary(out);
  for (int j = 1; j < u.ny() - 1; ++j)
    for (int i = 1; i < u.nx() - 1; ++i) {
      if (!out.mask(i, j)) continue;
      const double w = omega(i, j);
      out(i, j) = std::abs(std::exp(w) * b * W.d_zbar(i, j) - std::exp(-w) * a * W.d_z(i, j));
    }
  return out;
}

double beltrami_residual_specific(const ComplexGrid& u, const RealGrid& omega, cplx lambda) {
  return max_abs(beltrami_residual_specific_field(u, omega, lambda));
}

double default_tolerance(const GridGeometry& g) {
  const double h = std::max(g.hx(), g.hy());
  return std::max(1e-8, 10 * h * h);
}

bool VerificationReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

VerificationReport verify_map(const ComplexGrid& u, const MetricSpec& metric, const Expectations& expect,
                              const Tolerances& tol) {
  const double dflt = default_tolerance(u.geom);
  auto pick = [&](double t) { return t > 0 ? t : dflt; };
  VerificationReport r;
  r.grid = u.geom;
  r.metric_name = metric.name;
  auto below = [&](const std::string& name, double value, double t) {
    r.checks.push_back({name, value, t, std::isfinite(value) && value <= t});
  };

  r.harmonic_max = harmonic_residual(u, metric);
  below("harmonic", r.harmonic_max, pick(tol.harmonic));

  const HopfField hopf = hopf_field(u, metric);
  r.hopf_holomorphy_max = hopf.holomorphy;
  r.hopf_std = hopf.std;
  r.hopf_mean = hopf.mean;
  r.hopf_min_abs = hopf.min_abs;
  below("hopf_holomorphy", r.hopf_holomorphy_max, pick(tol.hopf));
  r.checks.push_back({"hopf_nonvanishing", hopf.min_abs, 0.0, hopf.min_abs > 0});
  if (expect.hopf_constant) {
    below("hopf_std", r.hopf_std, tol.hopf_std);
    below("hopf_constant", std::abs(hopf.mean - *expect.hopf_constant), tol.hopf_std);
    r.lambda = -std::log(*expect.hopf_constant);
  } else {
    r.lambda = -std::log(hopf.mean);
  }

  const Decomposition d = beltrami_decompose(u);
  r.phi_harmonicity_max = d.degenerate ? nan : d.phi_harmonicity;
  below("phi_harmonicity", r.phi_harmonicity_max, pick(tol.phi));

  const RealGrid& omega = expect.omega ? *expect.omega : d.omega;
  r.beltrami_max = d.degenerate && !expect.omega ? nan : beltrami_residual_specific(u, omega, r.lambda);
  below("beltrami", r.beltrami_max, pick(tol.beltrami));

  r.expected_curvature = expect.curvature.value_or(metric.curvature);
  try {
    const Reconstruction rec = reconstruct_metric(u, r.lambda);
    r.curvature_formula_dev = rec.formula_dev;
    r.reconstructed_harmonic_max = rec.harmonic;
    RealGrid dev = rec.K;
    dev.values -= r.expected_curvature;
    r.curvature_dev_max = std::isfinite(r.expected_curvature) ? max_abs(dev) : nan;
    if (metric.kind != MetricKind::sampled) {
      const MetricAlong m = metric_along(metric, u, fd::wirtinger(u));
      RealGrid ratio(u.geom);
      ratio.values = rec.eF.values / m.eF.values - 1;
      ratio.mask = rec.eF.mask && m.eF.mask;
      mask_boundary(ratio);
      r.metric_ratio_dev = max_abs(ratio);
    } else {
      r.metric_ratio_dev = nan;
    }
  } catch (const DomainError&) {
    r.curvature_formula_dev = r.reconstructed_harmonic_max = r.curvature_dev_max = r.metric_ratio_dev = nan;
  }
  if (std::isfinite(r.expected_curvature)) below("curvature", r.curvature_dev_max, tol.curvature);
  below("curvature_formula", r.curvature_formula_dev, tol.curvature);

  const JacobianField jac = jacobian_and_norms(u, metric);
  r.jacobian_min = jac.min_abs;
  r.orientation_consistent = jac.orientation_consistent;
  r.checks.push_back({"jacobian", jac.min_abs, 0.0, jac.min_abs > 0 && jac.orientation_consistent});

  r.orthogonality_max = orthogonality(u, r.lambda);
  below("orthogonality", r.orthogonality_max, pick(tol.orthogonality));
  return r;
}

}  // namespace hmap::verify
