#include "hmap/mapgen.hpp"

#include <cmath>
#include <limits>

#include "hmap/elliptic.hpp"

namespace hmap::mapgen {

namespace el = hmap::elliptic;
using soliton::Branch;

namespace {

// 1/2 log|(1 + x)/(1 - x)|: artanh inside (-1, 1), arcoth outside.
double log_ratio(double x) { return 0.5 * std::log(std::abs((1 + x) / (1 - x))); }

// Phase integral whose difference gives R - R0 - alpha (X - X0), up to the
// branch prefactor applied in map_R.
double phase_integral(double v, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  switch (s.branch) {
    case Branch::elliptic: {
      if (s.ell < 1) return el::ellint_Pi(mp.n, v + s.K, s.ell);
      // int dw / (1 - n cd^2(w | ell)) for ell > 1
      const double k = std::sqrt(s.ell);
      const double N = (1 - mp.n / s.ell) / (1 - mp.n);
      return (v + (N - 1) / k * el::ellint_sn2_weighted(N, k * v, 1 / s.ell)) / (1 - mp.n);
    }
    case Branch::turning: {
      // int (1 - sn^2) / (1 - N sn^2) dw
      const double c = std::cos(s.tau);
      const double N = c * c * (s.m - 1) / s.M;
      return v - (1 - N) * el::ellint_sn2_weighted(N, v, s.ell);
    }
    case Branch::linear: {
      // v is omega itself here
      return std::atan(std::tan(s.tau) * std::tanh(v));
    }
  }
  return 0;
}

}  // namespace

MapParams MapParams::make(const SolitonParams& s, double alpha, double X0, double R0, double S0) {
  if (alpha == 0 || !std::isfinite(alpha)) throw ParameterError("map: alpha must be nonzero");
  if (!std::isfinite(X0) || !std::isfinite(R0) || !std::isfinite(S0))
    throw ParameterError("map: offsets must be finite");
  MapParams mp;
  mp.soliton = s;
  mp.alpha = alpha;
  mp.X0 = X0;
  mp.R0 = R0;
  mp.S0 = S0;
  mp.sc = std::sin(s.tau) * std::cos(s.tau);
  if (std::abs(mp.sc) <= 4 * std::numeric_limits<double>::epsilon()) mp.sc = 0;
  mp.n = 1 / s.M;
  if (mp.sc != 0) mp.I0 = phase_integral(s.phase(s.Y0), mp);

  switch (s.branch) {
    case Branch::elliptic: {
      const double r = std::sqrt(s.C * s.M);
      mp.sigma0 = log_ratio(s.domega0 / r);
      mp.scaleS = -r / alpha;
      break;
    }
    case Branch::turning: {
      const double r = std::sqrt(-s.C * s.M);
      mp.sigma0 = std::atan(s.domega0 / r);
      mp.scaleS = r / alpha;
      break;
    }
    case Branch::linear:
      mp.sigma0 = 0;
      mp.scaleS = 2 * s.eps * std::sqrt(s.C) / alpha;
      break;
  }
  return mp;
}

double map_R(double X, double Y, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  double R = mp.R0 + mp.alpha * (X - mp.X0);
  if (mp.sc == 0) return R;
  const double dI = phase_integral(s.phase(Y), mp) - mp.I0;
  switch (s.branch) {
    case Branch::elliptic: {
      const double A = (s.m - 1) * mp.alpha * mp.sc / s.M;
      R -= s.eps * A / s.rate * dI;
      break;
    }
    case Branch::turning:
      R -= mp.alpha * mp.sc * (s.m - 1) / s.M / s.rate * dI;
      break;
    case Branch::linear:
      R -= mp.alpha / (s.eps * s.rate) * dI;
      break;
  }
  return R;
}

Flagged<double> map_S(double Y, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  switch (s.branch) {
    case Branch::elliptic: {
      const auto wp = soliton::omega_prime(Y, s);
      if (!wp.ok()) return wp;
      const double r = std::sqrt(s.C * s.M);
      const double x = wp.value / r;
      if (std::abs(std::abs(x) - 1) <= 4 * std::numeric_limits<double>::epsilon())
        return Flagged<double>::singular();
      return Flagged<double>::regular(mp.S0 - mp.alpha / r * (log_ratio(x) - mp.sigma0));
    }
    case Branch::turning: {
      const auto wp = soliton::omega_prime(Y, s);
      if (!wp.ok()) return wp;
      const double r = std::sqrt(-s.C * s.M);
      return Flagged<double>::regular(mp.S0 + mp.alpha / r * (std::atan(wp.value / r) - mp.sigma0));
    }
    case Branch::linear: {
      const auto sc = soliton::sinh_cosh_omega(Y, s);
      const double c2 = std::cos(s.tau) * std::cos(s.tau);
      const double sh0 = std::sinh(s.omega0);
      const double ratio = (c2 + sc.sinh * sc.sinh) / (c2 + sh0 * sh0);
      if (!(ratio > 0)) return Flagged<double>::singular();
      return Flagged<double>::regular(mp.S0 + std::log(ratio) / mp.scaleS);
    }
  }
  return Flagged<double>::singular();
}

Flagged<double> phi_factor(double Y, const MapParams& mp) {
  const auto sc = soliton::sinh_cosh_omega(Y, mp.soliton);
  if (sc.pole) return Flagged<double>::singular();
  const double c = std::cos(mp.soliton.tau), s = std::sin(mp.soliton.tau);
  return Flagged<double>::regular(c * c * sc.cosh * sc.cosh + s * s * sc.sinh * sc.sinh);
}

Flagged<double> dR_dY_trig(double Y, const MapParams& mp) {
  const auto phi = phi_factor(Y, mp);
  if (!phi.ok()) return phi;
  return Flagged<double>::regular(-mp.alpha * mp.sc / phi.value);
}

Flagged<double> dS_dY_trig(double Y, const MapParams& mp) {
  const auto phi = phi_factor(Y, mp);
  const auto sc = soliton::sinh_cosh_omega(Y, mp.soliton);
  if (!phi.ok() || sc.pole) return Flagged<double>::singular();
  return Flagged<double>::regular(mp.alpha * sc.sinh * sc.cosh / phi.value);
}

Flagged<double> dR_dY(double Y, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  if (s.branch == Branch::linear) return dR_dY_trig(Y, mp);
  const auto wp = soliton::omega_prime(Y, s);
  if (!wp.ok()) return wp;
  const double q = s.C * (s.m - 1);  // 4 K_N / rho^2
  return Flagged<double>::regular(-mp.alpha * mp.sc * q / (s.C * s.M - wp.value * wp.value));
}

Flagged<double> dS_dY(double Y, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  if (s.branch == Branch::linear) return dS_dY_trig(Y, mp);
  const auto wp = soliton::omega_prime(Y, s);
  const auto wpp = soliton::omega_second(Y, s);
  if (!wp.ok() || !wpp.ok()) return Flagged<double>::singular();
  return Flagged<double>::regular(mp.alpha * wpp.value / (wp.value * wp.value - s.C * s.M));
}

TargetMetric metric_density(double S, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  const double Sigma = mp.sigma0 + mp.scaleS * (S - mp.S0);
  const double a2 = mp.alpha * mp.alpha;
  TargetMetric t;
  switch (s.branch) {
    case Branch::elliptic: {
      const double pre = 4 * s.M / (std::abs(s.m - 1) * a2 * s.rho * s.rho);
      if (s.kN > 0) {
        const double ch = std::cosh(Sigma);
        t.eF = pre / (ch * ch);
        t.dF_dS = -2 * std::tanh(Sigma) * mp.scaleS;
      } else {
        const double sh = std::sinh(Sigma);
        if (sh == 0) return {0, 0, false};
        t.eF = pre / (sh * sh);
        t.dF_dS = -2 / std::tanh(Sigma) * mp.scaleS;
      }
      break;
    }
    case Branch::turning: {
      const double c = std::cos(Sigma);
      if (c == 0) return {0, 0, false};
      t.eF = -s.C * s.M / a2 / (c * c);
      t.dF_dS = 2 * std::tan(Sigma) * mp.scaleS;
      break;
    }
    case Branch::linear: {
      // flat target: e^F = e^F(S0) exp(2 eps sqrt(C) (S - S0) / alpha)
      const double c2 = std::cos(s.tau) * std::cos(s.tau);
      const double sh0 = std::sinh(s.omega0);
      t.eF = 4 * (c2 + sh0 * sh0) / (a2 * s.rho * s.rho) * std::exp(mp.scaleS * (S - mp.S0));
      t.dF_dS = mp.scaleS;
      break;
    }
  }
  t.ok = std::isfinite(t.eF) && t.eF > 0;
  return t;
}

Flagged<double> metric_density_omega(double Y, const MapParams& mp) {
  const auto phi = phi_factor(Y, mp);
  if (!phi.ok()) return phi;
  const double ar = mp.alpha * mp.soliton.rho;
  return Flagged<double>::regular(4 * phi.value / (ar * ar));
}

std::complex<double> specific_coords(std::complex<double> z, std::complex<double> lambda) {
  return std::exp(-0.5 * lambda) * z;
}

std::complex<double> MapSample::u_zeta() const {
  return 0.5 * std::complex<double>(R_xi + S_eta, S_xi - R_eta);
}

std::complex<double> MapSample::u_zetabar() const {
  return 0.5 * std::complex<double>(R_xi - S_eta, S_xi + R_eta);
}

MapSample evaluate(std::complex<double> zeta, const MapParams& mp) {
  const SolitonParams& s = mp.soliton;
  MapSample out;
  out.xi = zeta.real();
  out.eta = zeta.imag();
  const auto Z = soliton::rotate_coords(zeta, s);
  out.X = Z.real();
  out.Y = Z.imag();
  const auto S = map_S(out.Y, mp);
  const auto w = soliton::omega(out.Y, s);
  const auto rY = dR_dY(out.Y, mp);
  const auto sY = dS_dY(out.Y, mp);
  const auto eF = metric_density_omega(out.Y, mp);
  out.regular = S.ok() && w.ok() && rY.ok() && sY.ok() && eF.ok();
  if (!out.regular) return out;
  out.R = map_R(out.X, out.Y, mp);
  out.S = S.value;
  out.omega = w.value;
  out.eF = eF.value;
  // X = rho (xi cos tau + eta sin tau), Y = rho (-xi sin tau + eta cos tau)
  const double c = s.rho * std::cos(s.tau), sn = s.rho * std::sin(s.tau);
  out.R_xi = mp.alpha * c - rY.value * sn;
  out.R_eta = mp.alpha * sn + rY.value * c;
  out.S_xi = -sY.value * sn;
  out.S_eta = sY.value * c;
  return out;
}

MapGrid sample_map(const MapParams& mp, const GridGeometry& g) {
  MapGrid out{ComplexGrid(g), RealGrid(g), RealGrid(g)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const MapSample ms = evaluate(g.z(i, j), mp);
      out.u(i, j) = ms.u();
      out.omega(i, j) = ms.omega;
      out.eF(i, j) = ms.eF;
      out.u.mask(i, j) = ms.regular;
      out.omega.mask(i, j) = ms.regular;
      out.eF.mask(i, j) = ms.regular;
    }
  return out;
}

}  // namespace hmap::mapgen
