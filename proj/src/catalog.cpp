#include "hmap/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hmap/elliptic.hpp"

namespace hmap::catalog {

namespace {

constexpr double pi = std::numbers::pi;

// Illinois-modified regula falsi on a sign-changing bracket.
template <class Fn>
double illinois(Fn&& f, double lo, double hi, double flo, double fhi, double tol, int* iters = nullptr) {
  int side = 0;
  double x = lo;
  for (int k = 0; k < 200; ++k) {
    x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!std::isfinite(x) || x <= std::min(lo, hi) || x >= std::max(lo, hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (iters) *iters = k + 1;
    if (std::abs(fx) < tol || std::abs(hi - lo) < tol * std::max(1.0, std::abs(x))) return x;
    if ((fx > 0) == (fhi > 0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  throw ConvergenceError("root finder: no convergence in 200 iterations");
}

struct WolfState {
  double u, du;
};

WolfState wolf_rhs(const WolfState& s, double inv2t2) { return {s.du, inv2t2 * std::sinh(2 * s.u)}; }

WolfState rk4_step(const WolfState& s, double h, double inv2t2) {
  const auto k1 = wolf_rhs(s, inv2t2);
  const auto k2 = wolf_rhs({s.u + 0.5 * h * k1.u, s.du + 0.5 * h * k1.du}, inv2t2);
  const auto k3 = wolf_rhs({s.u + 0.5 * h * k2.u, s.du + 0.5 * h * k2.du}, inv2t2);
  const auto k4 = wolf_rhs({s.u + h * k3.u, s.du + h * k3.du}, inv2t2);
  return {s.u + h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u),
          s.du + h / 6 * (k1.du + 2 * k2.du + 2 * k3.du + k4.du)};
}

// u(1) for initial slope s; +inf once the trajectory blows up.
double wolf_endpoint(double s, double t, int steps, std::vector<WolfState>* path = nullptr) {
  const double h = 1.0 / steps, inv2t2 = 1 / (2 * t * t);
  WolfState st{0, s};
  if (path) {
    path->clear();
    path->push_back(st);
  }
  for (int k = 0; k < steps; ++k) {
    st = rk4_step(st, h, inv2t2);
    if (!std::isfinite(st.u) || std::abs(st.u) > 50) return std::copysign(INFINITY, s);
    if (path) path->push_back(st);
  }
  return st.u;
}

}  // namespace

// ---------------------------------------------------------------- Wolf

double WolfSolution::hopf_constant() const { return (c0 - 0.5) / (4 * t * t); }

namespace {

// Cubic Hermite cell [x_k, x_{k+1}]; at h = 1e-4 the error is ~ h^4 u'''' / 384.
struct HermiteAt {
  int k;
  double s, h;
};

HermiteAt locate(const WolfSolution& w, double x) {
  if (!(x >= -1e-12 && x <= 1 + 1e-12)) {
    std::ostringstream os;
    os << "wolf: x = " << x << " outside [0, 1]";
    throw DomainError(os.str());
  }
  const int n = static_cast<int>(w.x.size()) - 1;
  const double h = 1.0 / n;
  const int k = std::clamp(static_cast<int>(std::floor(x / h)), 0, n - 1);
  return {k, (x - w.x[k]) / h, h};
}

}  // namespace

double WolfSolution::u_at(double xq) const {
  const auto [k, s, h] = locate(*this, xq);
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * u[k] + (s3 - 2 * s2 + s) * h * du[k] + (-2 * s3 + 3 * s2) * u[k + 1] +
         (s3 - s2) * h * du[k + 1];
}

double WolfSolution::du_at(double xq) const {
  const auto [k, s, h] = locate(*this, xq);
  const double s2 = s * s;
  // derivative of the Hermite interpolant of u' with slopes u'' = sinh(2u)/(2t^2)
  const double a0 = std::sinh(2 * u[k]) / (2 * t * t), a1 = std::sinh(2 * u[k + 1]) / (2 * t * t);
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * du[k] + (s3 - 2 * s2 + s) * h * a0 + (-2 * s3 + 3 * s2) * du[k + 1] +
         (s3 - s2) * h * a1;
}

WolfSolution wolf_solve(double t, int n_nodes, double tol) {
  if (!(t > 1) || !std::isfinite(t)) throw ParameterError("wolf: t must be > 1");
  if (n_nodes < 10001) throw ParameterError("wolf: need at least 10001 nodes (RK4 step <= 1e-4)");
  const int steps = n_nodes - 1;
  const double target = std::acosh(t);
  auto F = [&](double s) { return wolf_endpoint(s, t, steps) - target; };

  // F(0) = -target < 0 (u == 0); grow the upper end until the sign changes.
  double lo = 0, flo = -target;
  double hi = target, fhi = F(hi);
  for (int k = 0; k < 60 && !(fhi > 0); ++k) {
    lo = hi;
    flo = fhi;
    hi *= 2;
    fhi = F(hi);
  }
  if (!(fhi > 0)) throw ParameterError("wolf: shooting bracket failure");
  if (std::isinf(fhi)) {
    // pull the upper end back inside the region where the trajectory exists
    for (int k = 0; k < 200 && std::isinf(fhi); ++k) {
      const double mid = 0.5 * (lo + hi);
      const double fm = F(mid);
      if (fm > 0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    if (std::isinf(fhi)) throw ParameterError("wolf: shooting bracket failure");
  }

  WolfSolution w;
  w.t = t;
  w.du0 = illinois(F, lo, hi, flo, fhi, tol, &w.shooting_iterations);

  std::vector<WolfState> path;
  const double end = wolf_endpoint(w.du0, t, steps, &path);
  w.boundary_error = std::abs(end - target);
  w.x.resize(path.size());
  w.u.resize(path.size());
  w.du.resize(path.size());
  double cmin = INFINITY, cmax = -INFINITY;
  for (std::size_t k = 0; k < path.size(); ++k) {
    w.x[k] = k == path.size() - 1 ? 1.0 : static_cast<double>(k) / steps;
    w.u[k] = path[k].u;
    w.du[k] = path[k].du;
    const double sh = std::sinh(path[k].u);
    const double c = t * t * path[k].du * path[k].du - sh * sh - 0.5;
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
  }
  w.c0 = t * t * w.du0 * w.du0 - 0.5;
  w.first_integral_drift = cmax - cmin;
  return w;
}

ComplexGrid wolf_map(const WolfSolution& sol, const GridGeometry& g) {
  ComplexGrid out(g);
  for (int i = 0; i < g.nx; ++i) {
    const double S = sol.t * std::atan(std::sinh(sol.u_at(g.x(i))));
    for (int j = 0; j < g.ny; ++j) out(i, j) = {g.y(j), S};
  }
  return out;
}

mapgen::MapParams wolf_as_soliton(double t, double c0) {
  if (!(t > 1)) throw ParameterError("wolf: t must be > 1");
  if (!(c0 > 0.5)) throw ParameterError("wolf: need c0 > 1/2");
  const double m = c0 + 0.5;
  const double sm = std::sqrt(m);
  const double omega0 = 0.5 * std::log((sm - 1) / (sm + 1));
  const double alpha = -2 * t / std::sqrt(c0 - 0.5);
  const auto s = soliton::SolitonParams::make(-1, 1.0, -pi / 2, 0.0, omega0, 0.0);
  return mapgen::MapParams::make(s, alpha);
}

cplx wolf_specific_coords(cplx z, double t, double c0) {
  if (!(c0 > 0.5)) throw ParameterError("wolf: need c0 > 1/2");
  return std::sqrt((c0 - 0.5) / (4 * t * t)) * z;
}

// ---------------------------------------------------------- half-cylinder

HalfCylinder HalfCylinder::make(double c) {
  if (!(c > 0) || !std::isfinite(c)) throw ParameterError("half-cylinder: c must be > 0");
  return HalfCylinder{c};
}

double HalfCylinder::v(double y) const {
  const double r = std::sqrt(c);
  return std::sinh(r * (y - 1) + std::asinh(r)) / r;
}

double HalfCylinder::dv(double y) const {
  const double r = std::sqrt(c);
  return std::cosh(r * (y - 1) + std::asinh(r));
}

double HalfCylinder::d2v(double y) const { return c * v(y); }

double HalfCylinder::ode_residual(double y) const {
  const double a = v(y), b = dv(y);
  return a * d2v(y) - b * b + 1;
}

double HalfCylinder::mu(double y) const {
  const double b = dv(y);
  return (1 - b) / (1 + b);
}

ComplexGrid half_cylinder_map(double c, const GridGeometry& g) {
  const auto hc = HalfCylinder::make(c);
  if (g.y0 < 1 - 1e-12) throw DomainError("half-cylinder: requires y >= 1");
  ComplexGrid out(g);
  for (int j = 0; j < g.ny; ++j) {
    const double v = hc.v(g.y(j));
    for (int i = 0; i < g.nx; ++i) out(i, j) = {g.x(i), v};
  }
  return out;
}

// ------------------------------------------------------------- STW strip

STWParams STWParams::make(double alpha, double a, double b) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw ParameterError("stw: alpha must be > 0");
  if (!(b > 0) || !std::isfinite(b)) throw ParameterError("stw: b must be > 0");
  if (!std::isfinite(a)) throw ParameterError("stw: a must be finite");
  STWParams p;
  p.alpha = alpha;
  p.a = a;
  p.b = b;
  p.c2 = alpha * alpha + b * b + a * a * a * a;
  const double disc = std::sqrt(std::max(0.0, p.c2 * p.c2 - 4 * alpha * alpha * b * b));
  // w1 from Vieta so that w1 w2 = b/alpha holds without cancellation
  p.w2 = std::sqrt((p.c2 + disc) / 2) / alpha;
  p.w1 = b / (alpha * p.w2);
  p.ell = 1 - (p.w1 * p.w1) / (p.w2 * p.w2);
  p.rho = 2 / (alpha * std::sqrt(p.w2 * p.w2 - p.w1 * p.w1));
  p.tan_tau = -std::sqrt(std::max(0.0, (p.w2 * p.w2 - 1) / (1 - p.w1 * p.w1)));
  p.tau = std::atan(p.tan_tau);
  p.C = -alpha * alpha * p.w1 * p.w1;
  p.M = 1 / (p.w1 * p.w1);
  p.m = (p.w2 * p.w2) / (p.w1 * p.w1);
  p.omega0 = std::atanh(p.w1 / p.w2);
  return p;
}

double stw_quarter_period_condition(double alpha, double a, double b) {
  const auto p = STWParams::make(alpha, a, b);
  return elliptic::complete_K(p.ell) - alpha * p.w2 * pi / 2;
}

STWParams STWParams::solve(double alpha, double a, double b_lo, double b_hi, double tol) {
  auto f = [&](double b) { return stw_quarter_period_condition(alpha, a, b); };
  const double flo = f(b_lo), fhi = f(b_hi);
  if (!((flo > 0) != (fhi > 0))) {
    std::ostringstream os;
    os << "stw: quarter-period condition has no sign change on b in [" << b_lo << ", " << b_hi << "]";
    throw ParameterError(os.str());
  }
  return make(alpha, a, illinois(f, b_lo, b_hi, flo, fhi, tol));
}

namespace {

void check_stw_y(double y) {
  if (!(y > 0 && y < pi)) {
    std::ostringstream os;
    os << "stw: y = " << y << " outside the open interval (0, pi)";
    throw DomainError(os.str());
  }
}

}  // namespace

double stw_S(double y, const STWParams& p) {
  check_stw_y(y);
  const auto e = elliptic::jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.ell);
  // arccot(w2 cn/sn) in (0, pi), written without the quotient
  return std::atan2(e.sn, p.w2 * e.cn);
}

double stw_dS_dy(double y, const STWParams& p) {
  check_stw_y(y);
  const auto e = elliptic::jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.ell);
  const double cs = e.cn / e.sn;
  // -(w2 alpha w2 cs') / (1 + w2^2 cs^2), cs' = -ns ds
  return p.alpha * p.w2 * p.w2 * (e.dn / (e.sn * e.sn)) / (1 + p.w2 * p.w2 * cs * cs);
}

double stw_dS_dy_dn(double y, const STWParams& p) {
  check_stw_y(y);
  const auto e = elliptic::jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.ell);
  const double w22 = p.w2 * p.w2;
  return p.alpha * w22 * e.dn / (w22 + (1 - w22) * e.sn * e.sn);
}

double stw_dh_dy(double y, const STWParams& p) {
  const double s = std::sin(stw_S(y, p));
  return p.a * p.a * s * s;
}

double stw_h(double y, const STWParams& p) {
  check_stw_y(y);
  const double y0 = pi / 2;
  const double len = y - y0;
  if (len == 0) return 0;
  int n = std::max(16, static_cast<int>(std::ceil(std::abs(len) / 1e-3)));
  if (n % 2) ++n;
  const double h = len / n;
  double sum = stw_dh_dy(y0, p) + stw_dh_dy(y, p);
  for (int k = 1; k < n; ++k) sum += (k % 2 ? 4 : 2) * stw_dh_dy(y0 + k * h, p);
  return sum * h / 3;
}

double stw_tanh_omega(double y, const STWParams& p) {
  return elliptic::jacobi_sn_cn_dn(p.alpha * p.w2 * y, p.ell).dn;
}

ComplexGrid stw_map(const STWParams& p, const GridGeometry& g) {
  const double mismatch = elliptic::complete_K(p.ell) - p.alpha * p.w2 * pi / 2;
  if (!(std::abs(mismatch) <= 1e-8)) {
    std::ostringstream os;
    os << "stw: quarter-period condition violated by " << mismatch;
    throw ParameterError(os.str());
  }
  if (!(g.y0 > 0 && g.y1 < pi)) throw DomainError("stw: grid must lie in 0 < y < pi");
  ComplexGrid out(g);
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    const double h = stw_h(y, p), S = stw_S(y, p);
    for (int i = 0; i < g.nx; ++i) out(i, j) = {p.alpha * g.x(i) + h, S};
  }
  return out;
}

// ---------------------------------------------------------------- Li-Tam

cplx litam_u(double a, cplx z, LiTamForm form) {
  if (!(a > 0)) throw ParameterError("li-tam: a must be > 0");
  if (form == LiTamForm::z) return {z.real(), std::sinh(a * z.imag()) / a};
  return {2 * z.imag() / a, -std::sinh(2 * z.real()) / a};
}

double litam_omega(double xi) {
  if (!(xi > 0)) throw DomainError("li-tam: omega needs xi > 0");
  return -std::log(std::tanh(xi));
}

ComplexGrid litam_map(double a, const GridGeometry& g, LiTamForm form) {
  if (form == LiTamForm::z && !(g.y0 > 0)) throw DomainError("li-tam: z-form needs y > 0");
  if (form == LiTamForm::zeta && !(g.x0 > 0)) throw DomainError("li-tam: zeta-form needs xi > 0");
  return sample<cplx>(g, [&](double x, double y) { return litam_u(a, {x, y}, form); });
}

verify::MetricSpec litam_metric(LiTamForm form) {
  return form == LiTamForm::z ? verify::MetricSpec::upper_half_plane() : verify::MetricSpec::lower_half_plane();
}

// ----------------------------------------------------------- one-soliton

verify::MetricSpec soliton_metric(const mapgen::MapParams& mp) {
  auto density = [mp](cplx u) {
    const auto d = mapgen::metric_density(u.imag(), mp);
    if (!d.ok || !std::isfinite(d.eF) || !(d.eF > 0)) {
      std::ostringstream os;
      os << "soliton metric: S = " << u.imag() << " outside the metric's domain";
      throw DomainError(os.str());
    }
    return d;
  };
  return verify::MetricSpec::closed_form(
      "soliton", static_cast<double>(mp.soliton.kN), [density](cplx u) { return density(u).eF; },
      [density](cplx u) { return cplx(0, -0.5 * density(u).dF_dS); });
}

}  // namespace hmap::catalog
