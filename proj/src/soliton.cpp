#include "hmap/soliton.hpp"

#include <cmath>
#include <numbers>

#include "hmap/elliptic.hpp"

namespace hmap::soliton {

namespace el = hmap::elliptic;

const char* to_string(Branch b) {
  switch (b) {
    case Branch::elliptic: return "elliptic";
    case Branch::linear: return "linear";
    case Branch::turning: return "turning";
  }
  return "?";
}

SolitonParams SolitonParams::make(int kN, double rho, double tau, double Y0, double omega0,
                                  double domega0, int eps) {
  if (kN < -1 || kN > 1) throw ParameterError("soliton: kN must be -1, 0 or +1");
  if (!(rho > 0) || !std::isfinite(rho)) throw ParameterError("soliton: rho must be positive");
  if (!std::isfinite(tau) || !std::isfinite(Y0) || !std::isfinite(omega0) ||
      !std::isfinite(domega0))
    throw ParameterError("soliton: parameters must be finite");
  if (eps < -1 || eps > 1) throw ParameterError("soliton: eps must be -1, 0 or +1");
  if (domega0 != 0) {
    const int s = domega0 > 0 ? 1 : -1;
    if (eps != 0 && eps != s)
      throw ParameterError("soliton: eps must equal the sign of domega0");
    eps = s;
  } else if (eps == 0) {
    eps = 1;
  }

  SolitonParams p;
  p.kN = kN;
  p.rho = rho;
  p.tau = tau;
  p.Y0 = Y0;
  p.omega0 = omega0;
  p.domega0 = domega0;
  p.eps = eps;

  const double sh = std::sinh(omega0);
  const double q = 4.0 * kN / (rho * rho);  // C (m - 1)
  p.C = domega0 * domega0 + q * sh * sh;
  if (p.C == 0) throw ParameterError("soliton: C = 0 (constant solution) is not supported");
  const double c2 = std::cos(tau) * std::cos(tau);

  if (kN == 0) {
    p.branch = Branch::linear;
    p.m = 1;
    p.M = 1;
    p.ell = 1;
    p.rate = std::sqrt(p.C);
    return p;
  }

  p.m = 1 + q / p.C;
  p.M = 1 + (q / p.C) * c2;

  if (p.C > 0) {
    if (p.m == 0) throw DomainError("soliton: m = 0 is a degenerate boundary case");
    if (p.m < 0) throw DomainError("soliton: m < 0 has no real one-soliton branch");
    p.branch = Branch::elliptic;
    p.ell = 1 / p.m;
    p.rate = std::sqrt(p.C * p.m);
    p.v0 = el::inverse_jacobi(el::InverseKind::sd, std::sqrt(p.m) * sh, p.ell);
    p.K = p.ell < 1 ? el::complete_K(p.ell) : el::complete_K(1 / p.ell);
    return p;
  }

  // C < 0 only happens for kN = -1 with omega0 != 0.
  p.branch = Branch::turning;
  p.sigma = omega0 > 0 ? 1 : -1;
  p.ell = 1 - 1 / p.m;
  p.rate = std::sqrt(-p.C * p.m);
  p.K = el::complete_K(p.ell);
  const double target = rho * std::sqrt(-p.C) / (2 * std::abs(sh));
  const double w = el::inverse_jacobi(el::InverseKind::cn, std::min(target, 1.0), p.ell);
  const double s = domega0 > 0 ? 1 : (domega0 < 0 ? -1 : 0);
  p.v0 = p.sigma * s * w;
  return p;
}

double SolitonParams::phase(double Y) const {
  switch (branch) {
    case Branch::elliptic: return eps * rate * (Y - Y0) + v0;
    case Branch::turning: return rate * (Y - Y0) + v0;
    case Branch::linear: return omega0 + eps * rate * (Y - Y0);
  }
  return 0;
}

std::complex<double> rotate_coords(std::complex<double> zeta, const SolitonParams& p) {
  return p.rho * std::polar(1.0, -p.tau) * zeta;
}

std::complex<double> unrotate_coords(std::complex<double> Z, const SolitonParams& p) {
  return std::polar(1.0, p.tau) * Z / p.rho;
}

SinhCosh sinh_cosh_omega(double Y, const SolitonParams& p) {
  SinhCosh r;
  const double v = p.phase(Y);
  switch (p.branch) {
    case Branch::linear:
      r.sinh = std::sinh(v);
      r.cosh = std::cosh(v);
      return r;
    case Branch::elliptic: {
      const auto e = el::jacobi_sn_cn_dn(v, p.ell);
      const auto sd = e.pq('s', 'd');
      const auto nd = e.pq('n', 'd');
      if (!sd.ok() || !nd.ok()) {
        r.pole = true;
        r.sinh = sd.value;
        r.cosh = std::numeric_limits<double>::infinity();
        return r;
      }
      r.sinh = sd.value / std::sqrt(p.m);
      r.cosh = nd.value;
      return r;
    }
    case Branch::turning: {
      const auto e = el::jacobi_sn_cn_dn(v, p.ell);
      const auto nc = e.pq('n', 'c');
      if (!nc.ok()) {
        r.pole = true;
        r.sinh = p.sigma * nc.value;
        r.cosh = std::numeric_limits<double>::infinity();
        return r;
      }
      const double a = std::sqrt(p.m - 1);
      r.sinh = p.sigma * nc.value / a;
      // cosh = sqrt(m) dn / (sqrt(m - 1) |cn|)
      r.cosh = std::sqrt(p.m) * e.dn * std::abs(nc.value) / a;
      return r;
    }
  }
  return r;
}

Flagged<double> omega(double Y, const SolitonParams& p) {
  if (p.branch == Branch::linear) return Flagged<double>::regular(p.phase(Y));
  const SinhCosh sc = sinh_cosh_omega(Y, p);
  if (sc.pole) return Flagged<double>::singular(sc.sinh);
  return Flagged<double>::regular(std::asinh(sc.sinh));
}

Flagged<double> omega_prime(double Y, const SolitonParams& p) {
  const double v = p.phase(Y);
  switch (p.branch) {
    case Branch::linear: return Flagged<double>::regular(p.domega0);
    case Branch::elliptic: {
      const auto cd = el::jacobi_pq('c', 'd', v, p.ell);
      if (!cd.ok()) return cd;
      return Flagged<double>::regular(p.eps * std::sqrt(p.C) * cd.value);
    }
    case Branch::turning: {
      const auto e = el::jacobi_sn_cn_dn(v, p.ell);
      const auto nc = e.pq('n', 'c');
      if (!nc.ok()) return Flagged<double>::singular(p.sigma * e.sn);
      return Flagged<double>::regular(p.sigma * std::sqrt(-p.C) * e.sn * std::abs(nc.value));
    }
  }
  return Flagged<double>::regular(0);
}

Flagged<double> omega_second(double Y, const SolitonParams& p) {
  const double v = p.phase(Y);
  switch (p.branch) {
    case Branch::linear: return Flagged<double>::regular(0);
    case Branch::elliptic: {
      // d/dv cd = -(1 - ell) sd nd
      const auto e = el::jacobi_sn_cn_dn(v, p.ell);
      const auto sd = e.pq('s', 'd'), nd = e.pq('n', 'd');
      if (!sd.ok() || !nd.ok()) return Flagged<double>::singular(-sd.value);
      return Flagged<double>::regular(-p.C * std::sqrt(p.m) * (1 - p.ell) * sd.value * nd.value);
    }
    case Branch::turning: {
      const auto e = el::jacobi_sn_cn_dn(v, p.ell);
      const auto nc = e.pq('n', 'c');
      if (!nc.ok()) return Flagged<double>::singular(p.sigma);
      const double sgn = e.cn < 0 ? -1.0 : 1.0;
      return Flagged<double>::regular(p.sigma * (-p.C) * std::sqrt(p.m) * sgn * e.dn * nc.value *
                                      nc.value);
    }
  }
  return Flagged<double>::regular(0);
}

double first_integral_defect(double Y, const SolitonParams& p) {
  const auto wp = omega_prime(Y, p);
  const auto sc = sinh_cosh_omega(Y, p);
  if (!wp.ok() || sc.pole) return std::numeric_limits<double>::quiet_NaN();
  return wp.value * wp.value / p.C + (p.m - 1) * sc.sinh * sc.sinh - 1;
}

double sinh_gordon_residual(const SolitonParams& p, const std::vector<double>& Ys, double h) {
  const double k = 2.0 * p.kN / (p.rho * p.rho);
  double worst = 0;
  for (double Y : Ys) {
    const auto a = omega(Y - h, p), b = omega(Y, p), c = omega(Y + h, p);
    if (!a.ok() || !b.ok() || !c.ok()) continue;
    const double d2 = (a.value - 2 * b.value + c.value) / (h * h);
    worst = std::max(worst, std::abs(d2 + k * std::sinh(2 * b.value)));
  }
  return worst;
}

}  // namespace hmap::soliton
