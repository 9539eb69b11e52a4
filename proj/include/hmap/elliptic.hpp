#pragma once

// Elliptic integrals and Jacobi elliptic functions, real argument and real
// parameter m (squared modulus). sn/cn/dn use the descending Landen (AGM)
// recursion; integrals use Carlson's symmetric forms R_F, R_C, R_J.
//
// Parameter ranges:
//   m in [0, 1)   direct
//   m < 0         imaginary-modulus transformation onto (0, 1)
//   m == 1        hyperbolic degenerations
//   m > 1         reciprocal-parameter transformation onto (0, 1)

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <string>

#include "hmap/core.hpp"

namespace hmap::elliptic {

namespace detail {

template <std::floating_point Real>
constexpr Real pi = std::numbers::pi_v<Real>;

template <std::floating_point Real>
Real max3(Real a, Real b, Real c) {
  return std::max(a, std::max(b, c));
}

}  // namespace detail

/// Carlson's R_F(x, y, z); x, y, z >= 0 with at most one zero.
template <std::floating_point Real>
Real carlson_rf(Real x, Real y, Real z) {
  if (x < 0 || y < 0 || z < 0 || (x + y == 0) || (x + z == 0) || (y + z == 0)) {
    throw DomainError("carlson_rf: arguments must be non-negative with at most one zero");
  }
  constexpr Real errtol = Real(8e-4);
  Real xt = x, yt = y, zt = z, ave, dx, dy, dz;
  for (int it = 0;; ++it) {
    const Real sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const Real lambda = sx * (sy + sz) + sy * sz;
    xt = Real(0.25) * (xt + lambda);
    yt = Real(0.25) * (yt + lambda);
    zt = Real(0.25) * (zt + lambda);
    ave = (xt + yt + zt) / 3;
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
    if (detail::max3(std::abs(dx), std::abs(dy), std::abs(dz)) < errtol || it > 200) break;
  }
  const Real e2 = dx * dy - dz * dz;
  const Real e3 = dx * dy * dz;
  return (1 + (e2 / 24 - Real(0.1) - Real(3) / 44 * e3) * e2 + e3 / 14) / std::sqrt(ave);
}

/// Carlson's degenerate R_C(x, y) for x >= 0, y > 0.
template <std::floating_point Real>
Real carlson_rc(Real x, Real y) {
  if (x < 0 || y <= 0) throw DomainError("carlson_rc: need x >= 0, y > 0");
  constexpr Real errtol = Real(4e-4);
  Real xt = x, yt = y, ave, s;
  for (int it = 0;; ++it) {
    const Real lambda = 2 * std::sqrt(xt) * std::sqrt(yt) + yt;
    xt = Real(0.25) * (xt + lambda);
    yt = Real(0.25) * (yt + lambda);
    ave = (xt + yt + yt) / 3;
    s = (yt - ave) / ave;
    if (std::abs(s) < errtol || it > 200) break;
  }
  return (1 + s * s * (Real(0.3) + s * (Real(1) / 7 + s * (Real(0.375) + s * Real(9) / 22)))) /
         std::sqrt(ave);
}

/// Carlson's R_J(x, y, z, p) for x, y, z >= 0 (at most one zero) and p > 0.
template <std::floating_point Real>
Real carlson_rj(Real x, Real y, Real z, Real p) {
  if (x < 0 || y < 0 || z < 0 || p <= 0 || (x + y == 0) || (x + z == 0) || (y + z == 0)) {
    throw DomainError("carlson_rj: invalid arguments (p must be positive)");
  }
  constexpr Real errtol = Real(5e-4);
  constexpr Real c1 = Real(3) / 14, c2 = Real(1) / 3, c3 = Real(3) / 22, c4 = Real(3) / 26;
  constexpr Real c5 = Real(0.75) * c3, c6 = Real(1.5) * c4, c7 = Real(0.5) * c2, c8 = c3 + c3;
  Real sum = 0, fac = 1, xt = x, yt = y, zt = z, pt = p;
  Real ave, dx, dy, dz, dp;
  for (int it = 0;; ++it) {
    const Real sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    const Real lambda = sx * (sy + sz) + sy * sz;
    const Real a = pt * (sx + sy + sz) + sx * sy * sz;
    const Real b = pt * (pt + lambda) * (pt + lambda);
    sum += fac * carlson_rc(a * a, b);
    fac *= Real(0.25);
    xt = Real(0.25) * (xt + lambda);
    yt = Real(0.25) * (yt + lambda);
    zt = Real(0.25) * (zt + lambda);
    pt = Real(0.25) * (pt + lambda);
    ave = Real(0.2) * (xt + yt + zt + pt + pt);
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
    dp = (ave - pt) / ave;
    if (std::max(detail::max3(std::abs(dx), std::abs(dy), std::abs(dz)), std::abs(dp)) < errtol ||
        it > 200)
      break;
  }
  const Real ea = dx * (dy + dz) + dy * dz;
  const Real eb = dx * dy * dz;
  const Real ec = dp * dp;
  const Real ed = ea - 3 * ec;
  const Real ee = eb + 2 * dp * (ea - ec);
  return 3 * sum + fac *
                       (1 + ed * (-c1 + c5 * ed - c6 * ee) + eb * (c7 + dp * (-c8 + dp * c4)) +
                        dp * ea * (c2 - dp * c3) - c2 * dp * ec) /
                       (ave * std::sqrt(ave));
}

/// Complete integral of the first kind K(m) = F(pi/2 | m), by the
/// arithmetic-geometric mean. Requires m < 1.
template <std::floating_point Real>
Real complete_K(Real m) {
  if (!(m < 1)) throw DomainError("complete_K: parameter must be < 1 (K diverges at m = 1)");
  Real a = 1, b = std::sqrt(1 - m);
  for (int it = 0; it < 64 && std::abs(a - b) > 4 * std::numeric_limits<Real>::epsilon() * a;
       ++it) {
    const Real an = Real(0.5) * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return detail::pi<Real> / (a + b);
}

/// Bundle of the quarter periods for one parameter value.
template <std::floating_point Real>
struct EllipticParameterPack {
  Real m{};
  Real K{};
  Real Kprime{};  ///< K(1 - m); +inf when m <= 0

  static EllipticParameterPack make(Real m) {
    EllipticParameterPack p;
    p.m = m;
    p.K = complete_K(m);
    p.Kprime = m > 0 ? complete_K(1 - m) : std::numeric_limits<Real>::infinity();
    return p;
  }
};

namespace detail {

// F(phi | m) for |phi| <= pi/2 via Carlson.
template <std::floating_point Real>
Real incomplete_F_principal(Real phi, Real m) {
  const Real s = std::sin(phi), c = std::cos(phi);
  const Real d2 = 1 - m * s * s;
  if (!(d2 > 0)) throw DomainError("incomplete_F: 1 - m sin^2(phi) must stay positive");
  if (s == 0) return phi;
  return s * carlson_rf(c * c, d2, Real(1));
}

}  // namespace detail

/// Incomplete integral of the first kind F(phi | m) = int_0^phi dt / sqrt(1 - m sin^2 t).
template <std::floating_point Real>
Real incomplete_F(Real phi, Real m) {
  const Real half_pi = detail::pi<Real> / 2;
  if (std::abs(phi) <= half_pi) return detail::incomplete_F_principal(phi, m);
  if (!(m < 1)) {
    throw DomainError("incomplete_F: radicand vanishes on the integration path");
  }
  const Real j = std::round(phi / detail::pi<Real>);
  const Real r = phi - j * detail::pi<Real>;
  return 2 * j * complete_K(m) + detail::incomplete_F_principal(r, m);
}

/// The triple (sn, cn, dn) at (u, m), plus the derived quotient family.
template <std::floating_point Real>
struct JacobiEval {
  Real u{};
  Real m{};
  Real sn{};
  Real cn{};
  Real dn{};

  /// Value of the letter r in {s, c, d, n} (n is the constant 1).
  Real letter(char r) const {
    switch (r) {
      case 's': return sn;
      case 'c': return cn;
      case 'd': return dn;
      case 'n': return Real(1);
      default: throw ParameterError(std::string("jacobi: unknown letter '") + r + "'");
    }
  }

  /// pq = p/q with pp = 1; poles are flagged instead of thrown.
  Flagged<Real> pq(char p, char q) const {
    const Real num = letter(p), den = letter(q);
    if (p == q) return Flagged<Real>::regular(Real(1));
    const Real scale = std::max(Real(1), std::abs(num));
    if (std::abs(den) <= 64 * std::numeric_limits<Real>::epsilon() * scale) {
      return Flagged<Real>::singular(std::signbit(den) ? -num : num);
    }
    return Flagged<Real>::regular(num / den);
  }
};

namespace detail {

// Descending Landen / AGM recursion for 0 <= m < 1.
template <std::floating_point Real>
JacobiEval<Real> sn_cn_dn_unit(Real u, Real m) {
  JacobiEval<Real> r{u, m, 0, 1, 1};
  if (m == 0) {
    r.sn = std::sin(u);
    r.cn = std::cos(u);
    return r;
  }
  const Real K = complete_K(m);
  // periodicity 4K in sn, cn
  const Real period = 4 * K;
  const Real ur = u - period * std::round(u / period);

  constexpr int max_levels = 32;
  std::array<Real, max_levels + 1> a{}, c{};
  a[0] = 1;
  Real b = std::sqrt(1 - m);
  c[0] = std::sqrt(m);
  int n = 0;
  while (std::abs(c[n]) > std::numeric_limits<Real>::epsilon() && n < max_levels) {
    a[n + 1] = Real(0.5) * (a[n] + b);
    c[n + 1] = Real(0.5) * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  Real phi = std::ldexp(a[n] * ur, n);
  for (int k = n; k > 0; --k) {
    phi = Real(0.5) * (phi + std::asin(c[k] / a[k] * std::sin(phi)));
  }
  r.sn = std::sin(phi);
  r.cn = std::cos(phi);
  r.dn = std::sqrt(1 - m * r.sn * r.sn);
  return r;
}

}  // namespace detail

/// Jacobi sn, cn, dn at real argument u and real parameter m.
template <std::floating_point Real>
JacobiEval<Real> jacobi_sn_cn_dn(Real u, Real m) {
  if (!std::isfinite(u) || !std::isfinite(m)) throw DomainError("jacobi: non-finite input");
  if (m >= 0 && m < 1) return detail::sn_cn_dn_unit(u, m);
  JacobiEval<Real> r{u, m, 0, 1, 1};
  if (m == 1) {
    r.sn = std::tanh(u);
    r.cn = 1 / std::cosh(u);
    r.dn = r.cn;
    return r;
  }
  if (m > 1) {
    // sn(u|m) = sn(sqrt(m) u | 1/m) / sqrt(m), cn(u|m) = dn(..), dn(u|m) = cn(..)
    const Real k = std::sqrt(m);
    const auto t = detail::sn_cn_dn_unit(k * u, 1 / m);
    r.sn = t.sn / k;
    r.cn = t.dn;
    r.dn = t.cn;
    return r;
  }
  // m < 0: sn(u|m) = sd(v|mu)/s, cn(u|m) = cd(v|mu), dn(u|m) = nd(v|mu),
  // with s = sqrt(1 - m), v = s u, mu = -m / (1 - m).
  const Real s = std::sqrt(1 - m);
  const auto t = detail::sn_cn_dn_unit(s * u, -m / (1 - m));
  r.sn = t.sn / (s * t.dn);
  r.cn = t.cn / t.dn;
  r.dn = 1 / t.dn;
  return r;
}

/// Jacobi quotient pq(u | m) for p, q in {s, c, d, n}. A vanishing denominator
/// returns a pole-flagged signed infinity.
template <std::floating_point Real>
Flagged<Real> jacobi_pq(char p, char q, Real u, Real m) {
  return jacobi_sn_cn_dn(u, m).pq(p, q);
}

/// Jacobi amplitude am(u | m), continuous in u; defined for m <= 1.
template <std::floating_point Real>
Real amplitude(Real u, Real m) {
  if (m > 1) throw DomainError("amplitude: parameter must be <= 1");
  if (m == 1) return std::atan(std::sinh(u));
  const Real K = complete_K(m);
  const Real j = std::round(u / (2 * K));
  const Real r = u - 2 * K * j;
  const auto e = jacobi_sn_cn_dn(r, m);
  return j * detail::pi<Real> + std::atan2(e.sn, e.cn);
}

/// Which function an inverse_jacobi call inverts.
enum class InverseKind { sn, cn, dn, sd, cd, sc, nd };

namespace detail {

template <std::floating_point Real>
[[noreturn]] void range_error(const char* what) {
  throw DomainError(std::string("inverse_jacobi: argument outside the range of ") + what);
}

template <std::floating_point Real>
Real inverse_unit(InverseKind kind, Real x, Real m) {
  // m < 1 here (including negative m)
  const Real tol = 8 * std::numeric_limits<Real>::epsilon();
  auto asin_clamped = [&](Real s, const char* what) {
    if (std::abs(s) > 1 + tol) range_error<Real>(what);
    return std::asin(std::clamp(s, Real(-1), Real(1)));
  };
  switch (kind) {
    case InverseKind::sn:
      return incomplete_F(asin_clamped(x, "sn"), m);
    case InverseKind::cn:
      if (std::abs(x) > 1 + tol) range_error<Real>("cn");
      return incomplete_F(std::acos(std::clamp(x, Real(-1), Real(1))), m);
    case InverseKind::dn: {
      const Real lo = std::sqrt(1 - m);
      if (m == 0) {
        if (std::abs(x - 1) > tol) range_error<Real>("dn");
        return Real(0);
      }
      const Real s2 = (1 - x * x) / m;
      if (x <= 0 || s2 < -tol || s2 > 1 + tol || (m > 0 && x < lo - tol) || (m < 0 && x < 1 - tol))
        range_error<Real>("dn");
      return incomplete_F(std::asin(std::sqrt(std::clamp(s2, Real(0), Real(1)))), m);
    }
    case InverseKind::sd: {
      const Real den = 1 + m * x * x;
      if (!(den > 0)) range_error<Real>("sd");
      const Real s = x / std::sqrt(den);
      return incomplete_F(asin_clamped(s, "sd"), m);
    }
    case InverseKind::cd:
      if (std::abs(x) > 1 + tol) range_error<Real>("cd");
      return complete_K(m) - inverse_unit(InverseKind::sn, std::clamp(x, Real(-1), Real(1)), m);
    case InverseKind::sc:
      return incomplete_F(std::atan(x), m);
    case InverseKind::nd:
      if (x == 0) range_error<Real>("nd");
      return inverse_unit(InverseKind::dn, 1 / x, m);
  }
  return Real(0);
}

}  // namespace detail

/// Principal inverse of a Jacobi function at parameter m.
///
/// Branches for m < 1: sn, sd, sc in [-K, K]; cn, cd in [0, 2K]; dn, nd in [0, K].
/// Parameters m > 1 are mapped onto 1/m by the reciprocal transformation.
template <std::floating_point Real>
Real inverse_jacobi(InverseKind kind, Real x, Real m) {
  if (!std::isfinite(x)) throw DomainError("inverse_jacobi: non-finite argument");
  if (m < 1) return detail::inverse_unit(kind, x, m);
  if (m == 1) {
    switch (kind) {
      case InverseKind::sn:
        if (std::abs(x) >= 1) detail::range_error<Real>("sn");
        return std::atanh(x);
      case InverseKind::cn:
      case InverseKind::dn:
        if (x <= 0 || x > 1) detail::range_error<Real>("cn/dn");
        return std::acosh(1 / x);
      case InverseKind::sd:
      case InverseKind::sc:
        return std::asinh(x);
      case InverseKind::cd:
        if (x != 1) detail::range_error<Real>("cd");
        return Real(0);
      case InverseKind::nd:
        if (x < 1) detail::range_error<Real>("nd");
        return std::acosh(x);
    }
  }
  const Real k = std::sqrt(m);
  const Real mr = 1 / m;
  Real s = 0;
  switch (kind) {
    case InverseKind::sn: s = detail::inverse_unit(InverseKind::sn, k * x, mr); break;
    case InverseKind::cn: s = detail::inverse_unit(InverseKind::dn, x, mr); break;
    case InverseKind::dn: s = detail::inverse_unit(InverseKind::cn, x, mr); break;
    case InverseKind::sd: s = detail::inverse_unit(InverseKind::sc, k * x, mr); break;
    case InverseKind::cd:
      if (std::abs(x) < 1) detail::range_error<Real>("cd");
      s = detail::inverse_unit(InverseKind::cd, 1 / x, mr);
      break;
    case InverseKind::sc: s = detail::inverse_unit(InverseKind::sd, k * x, mr); break;
    case InverseKind::nd:
      if (x == 0) detail::range_error<Real>("nd");
      s = detail::inverse_unit(InverseKind::cn, 1 / x, mr);
      break;
  }
  return s / k;
}

namespace detail {

// Pi over a principal amplitude |phi| <= pi/2.
template <std::floating_point Real>
Real pi_principal(Real n, Real phi, Real m) {
  const Real s = std::sin(phi), c = std::cos(phi);
  if (s == 0) return Real(0);
  const Real p = 1 - n * s * s;
  if (!(p > 0)) throw DomainError("ellint_Pi: singular characteristic on the integration path");
  const Real c2 = c * c, d2 = 1 - m * s * s;
  return s * carlson_rf(c2, d2, Real(1)) + n / 3 * s * s * s * carlson_rj(c2, d2, Real(1), p);
}

// int_0^phi sin^2 / ((1 - n sin^2) sqrt(1 - m sin^2)) over |phi| <= pi/2.
template <std::floating_point Real>
Real sn2_principal(Real n, Real phi, Real m) {
  const Real s = std::sin(phi), c = std::cos(phi);
  if (s == 0) return Real(0);
  const Real p = 1 - n * s * s;
  if (!(p > 0)) throw DomainError("ellint_Pi: singular characteristic on the integration path");
  return s * s * s / 3 * carlson_rj(c * c, 1 - m * s * s, Real(1), p);
}

// Shared period reduction: value(u) = 2 j * full + principal(am(r)).
template <std::floating_point Real, class Principal, class Full>
Real reduce_by_period(Real n, Real u, Real m, Principal principal, Full full) {
  if (m == 1) return principal(n, std::atan(std::sinh(u)), m);
  const Real K = complete_K(m);
  const Real j = std::round(u / (2 * K));
  const Real r = u - 2 * K * j;
  const auto e = jacobi_sn_cn_dn(r, m);
  const Real phi = std::atan2(e.sn, e.cn);
  Real value = principal(n, phi, m);
  if (j != 0) {
    if (!(n < 1)) throw DomainError("ellint_Pi: singular characteristic on the integration path");
    value += 2 * j * full(n, m);
  }
  return value;
}

}  // namespace detail

/// Elliptic integral of the third kind Pi(n; u | m) = int_0^u dw / (1 - n sn^2(w|m)),
/// in argument form. Additive across periods; throws when 1 - n sn^2 vanishes
/// on [0, u].
template <std::floating_point Real>
Real ellint_Pi(Real n, Real u, Real m) {
  if (!std::isfinite(u)) throw DomainError("ellint_Pi: non-finite argument");
  if (m > 1) {
    const Real k = std::sqrt(m);
    return ellint_Pi(n / m, k * u, 1 / m) / k;
  }
  if (n == 0) return u;
  return detail::reduce_by_period(
      n, u, m, [](Real nn, Real phi, Real mm) { return detail::pi_principal(nn, phi, mm); },
      [](Real nn, Real mm) {
        return complete_K(mm) + nn / 3 * carlson_rj(Real(0), 1 - mm, Real(1), 1 - nn);
      });
}

/// G(n; u | m) = int_0^u sn^2 / (1 - n sn^2) dw. Equals (Pi - u)/n for n != 0
/// without the cancellation of that form when n is small.
template <std::floating_point Real>
Real ellint_sn2_weighted(Real n, Real u, Real m) {
  if (!std::isfinite(u)) throw DomainError("ellint_sn2_weighted: non-finite argument");
  if (m > 1) {
    const Real k = std::sqrt(m);
    return ellint_sn2_weighted(n / m, k * u, 1 / m) / (m * k);
  }
  return detail::reduce_by_period(
      n, u, m, [](Real nn, Real phi, Real mm) { return detail::sn2_principal(nn, phi, mm); },
      [](Real nn, Real mm) { return carlson_rj(Real(0), 1 - mm, Real(1), 1 - nn) / 3; });
}

}  // namespace hmap::elliptic
