#include "hmap/backlund.hpp"

#include <cmath>
#include <sstream>

namespace hmap::backlund {

namespace {

void check_order(int order) {
  if (order != 2 && order != 4) throw ParameterError("backlund: stencil order must be 2 or 4");
}

void check_same(const GridGeometry& a, const GridGeometry& b) {
  if (!a.same_as(b)) throw ParameterError("backlund: fields must share one grid");
}

// Regular where every node within r steps along either axis is regular and the
// node is at least r from the edge.
Mask stencil_mask(const Mask& in, int r) {
  const int nx = static_cast<int>(in.rows()), ny = static_cast<int>(in.cols());
  Mask out = Mask::Constant(nx, ny, false);
  for (int j = r; j < ny - r; ++j)
    for (int i = r; i < nx - r; ++i) {
      bool ok = true;
      for (int k = -r; k <= r && ok; ++k) ok = in(i + k, j) && in(i, j + k);
      out(i, j) = ok;
    }
  return out;
}

// First derivative of a line sampled with spacing h; one-sided at the ends.
void d1_line(const std::vector<double>& v, double h, int order, std::vector<double>& out) {
  const int n = static_cast<int>(v.size());
  out.resize(n);
  if (order == 2) {
    for (int k = 1; k < n - 1; ++k) out[k] = (v[k + 1] - v[k - 1]) / (2 * h);
    out[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    out[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    return;
  }
  for (int k = 2; k < n - 2; ++k) out[k] = (v[k - 2] - 8 * v[k - 1] + 8 * v[k + 1] - v[k + 2]) / (12 * h);
  out[0] = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h);
  out[1] = (-3 * v[0] - 10 * v[1] + 18 * v[2] - 6 * v[3] + v[4]) / (12 * h);
  out[n - 1] = (25 * v[n - 1] - 48 * v[n - 2] + 36 * v[n - 3] - 16 * v[n - 4] + 3 * v[n - 5]) / (12 * h);
  out[n - 2] = (3 * v[n - 1] + 10 * v[n - 2] - 18 * v[n - 3] + 6 * v[n - 4] - v[n - 5]) / (12 * h);
}

RealGrid deriv(const RealGrid& f, bool along_x, int order) {
  RealGrid out(f.geom);
  out.mask = f.mask;
  const int n = along_x ? f.nx() : f.ny(), lines = along_x ? f.ny() : f.nx();
  const double h = along_x ? f.geom.hx() : f.geom.hy();
  std::vector<double> v(n), d;
  for (int l = 0; l < lines; ++l) {
    for (int k = 0; k < n; ++k) v[k] = along_x ? f(k, l) : f(l, k);
    d1_line(v, h, order, d);
    for (int k = 0; k < n; ++k) (along_x ? out(k, l) : out(l, k)) = d[k];
  }
  return out;
}

// Laplacian on nodes with a central stencil; others masked.
RealGrid laplacian(const RealGrid& f, int order) {
  RealGrid out(f.geom);
  const int r = order / 2;
  out.mask = stencil_mask(f.mask, r);
  const double ihx2 = 1 / (f.geom.hx() * f.geom.hx()), ihy2 = 1 / (f.geom.hy() * f.geom.hy());
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      if (!out.mask(i, j)) continue;
      if (order == 2) {
        out(i, j) = (f(i - 1, j) - 2 * f(i, j) + f(i + 1, j)) * ihx2 + (f(i, j - 1) - 2 * f(i, j) + f(i, j + 1)) * ihy2;
      } else {
        out(i, j) = (-f(i - 2, j) + 16 * f(i - 1, j) - 30 * f(i, j) + 16 * f(i + 1, j) - f(i + 2, j)) * ihx2 / 12 +
                    (-f(i, j - 2) + 16 * f(i, j - 1) - 30 * f(i, j) + 16 * f(i, j + 1) - f(i, j + 2)) * ihy2 / 12;
      }
    }
  return out;
}

void check_grid(const RealGrid& f, int order) {
  check_order(order);
  if (f.nx() < 5 || f.ny() < 5) throw ParameterError("backlund: need at least 5 nodes per axis");
}

}  // namespace

RealGrid sine_gordon_residual_field(const RealGrid& theta, int order) {
  check_grid(theta, order);
  RealGrid out = laplacian(theta, order);
  for (int j = 0; j < out.ny(); ++j)
    for (int i = 0; i < out.nx(); ++i)
      if (out.mask(i, j)) out(i, j) = 0.25 * out(i, j) + 0.5 * std::sin(2 * theta(i, j));
  return out;
}

double sine_gordon_residual(const RealGrid& theta, int order) {
  return max_abs(sine_gordon_residual_field(theta, order));
}

RealGrid sinh_gordon_residual_field(const RealGrid& omega, int order) {
  check_grid(omega, order);
  RealGrid out = laplacian(omega, order);
  for (int j = 0; j < out.ny(); ++j)
    for (int i = 0; i < out.nx(); ++i)
      if (out.mask(i, j)) out(i, j) = 0.25 * out(i, j) - 0.5 * std::sinh(2 * omega(i, j));
  return out;
}

double sinh_gordon_residual(const RealGrid& omega, int order) {
  return max_abs(sinh_gordon_residual_field(omega, order));
}

namespace {

template <class Rhs>
BacklundPair pair_residuals(const RealGrid& theta, const RealGrid& omega, int order, Rhs&& rhs) {
  check_grid(theta, order);
  check_same(theta.geom, omega.geom);
  const auto th_x = deriv(theta, true, order), th_y = deriv(theta, false, order);
  const auto om_x = deriv(omega, true, order), om_y = deriv(omega, false, order);
  Mask both = theta.mask && omega.mask;
  BacklundPair p{theta, omega, RealGrid(theta.geom), RealGrid(theta.geom), 0, 0};
  p.r1.mask = stencil_mask(both, order / 2);
  p.r2.mask = p.r1.mask;
  for (int j = 0; j < theta.ny(); ++j)
    for (int i = 0; i < theta.nx(); ++i) {
      if (!p.r1.mask(i, j)) continue;
      const auto [a, b] = rhs(i, j);
      p.r1(i, j) = om_x(i, j) - th_y(i, j) - a;
      p.r2(i, j) = om_y(i, j) + th_x(i, j) - b;
    }
  p.r1_max = max_abs(p.r1);
  p.r2_max = max_abs(p.r2);
  return p;
}

}  // namespace

BacklundPair backlund_pair(const RealGrid& theta, const RealGrid& omega, int order) {
  return pair_residuals(theta, omega, order, [&](int i, int j) {
    const double w = omega(i, j), t = theta(i, j);
    return std::pair{-2 * std::sinh(w) * std::sin(t), -2 * std::cosh(w) * std::cos(t)};
  });
}

PairResidual backlund_residual_hyperbolic(const RealGrid& theta, const RealGrid& omega, int order) {
  const auto p = backlund_pair(theta, omega, order);
  return {p.r1_max, p.r2_max};
}

BacklundPair backlund_residual_general(const RealGrid& theta, const RealGrid& omega, const RealGrid& F, int order) {
  check_same(theta.geom, F.geom);
  const auto F_x = deriv(F, true, order), F_y = deriv(F, false, order);
  auto p = pair_residuals(theta, omega, order, [&](int i, int j) {
    const double th = std::tanh(omega(i, j));
    return std::pair{0.5 * th * F_x(i, j), 0.5 / th * F_y(i, j)};
  });
  // F's own stencil
  const Mask fm = stencil_mask(F.mask, order / 2);
  p.r1.mask = p.r1.mask && fm;
  p.r2.mask = p.r2.mask && fm;
  p.r1_max = max_abs(p.r1);
  p.r2_max = max_abs(p.r2);
  return p;
}

// ------------------------------------------------------------- integration

namespace {

// Midpoint value on [k, k+1] by cubic interpolation.
double midpoint(const std::vector<double>& v, int k) {
  const int n = static_cast<int>(v.size());
  if (k == 0) return (5 * v[0] + 15 * v[1] - 5 * v[2] + v[3]) / 16;
  if (k == n - 2) return (v[n - 4] - 5 * v[n - 3] + 15 * v[n - 2] + 5 * v[n - 1]) / 16;
  return (-v[k - 1] + 9 * v[k] + 9 * v[k + 1] - v[k + 2]) / 16;
}

// Data along one line: theta and the cross derivative entering the relation.
struct Line {
  std::vector<double> theta, cross;
};

// RK4 for w' = slope(w, theta, cross) node to node, outward from k0 both ways.
// Along xi (relation 1): w' = theta_eta - 2 sinh(w) sin(theta).
// Along eta (relation 2): w' = -theta_xi - 2 cosh(w) cos(theta).
template <class Field>
void integrate_line(const Line& L, int k0, double w0, double h, Field&& slope, std::vector<double>& w) {
  const int n = static_cast<int>(L.theta.size());
  w.assign(n, 0.0);
  w[k0] = w0;
  auto step = [&](int from, int to) {
    const int lo = std::min(from, to);
    const double s = to > from ? h : -h;
    const double tm = midpoint(L.theta, lo), cm = midpoint(L.cross, lo);
    const double y = w[from];
    const double k1 = slope(y, L.theta[from], L.cross[from]);
    const double k2 = slope(y + 0.5 * s * k1, tm, cm);
    const double k3 = slope(y + 0.5 * s * k2, tm, cm);
    const double k4 = slope(y + s * k3, L.theta[to], L.cross[to]);
    w[to] = y + s / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    if (!std::isfinite(w[to]) || std::abs(w[to]) > 50) {
      std::ostringstream os;
      os << "backlund_integrate: omega blows up between line nodes " << from << " and " << to;
      throw DomainError(os.str());
    }
  };
  for (int k = k0; k < n - 1; ++k) step(k, k + 1);
  for (int k = k0; k > 0; --k) step(k, k - 1);
}

double slope_xi(double w, double theta, double theta_eta) { return theta_eta - 2 * std::sinh(w) * std::sin(theta); }
double slope_eta(double w, double theta, double theta_xi) { return -theta_xi - 2 * std::cosh(w) * std::cos(theta); }

Line row(const RealGrid& theta, const RealGrid& cross, int j) {
  Line L;
  for (int i = 0; i < theta.nx(); ++i) {
    L.theta.push_back(theta(i, j));
    L.cross.push_back(cross(i, j));
  }
  return L;
}

Line column(const RealGrid& theta, const RealGrid& cross, int i) {
  Line L;
  for (int j = 0; j < theta.ny(); ++j) {
    L.theta.push_back(theta(i, j));
    L.cross.push_back(cross(i, j));
  }
  return L;
}

}  // namespace

IntegrationResult backlund_integrate(const RealGrid& theta, const Seed& seed, const IntegrateOptions& opt) {
  check_grid(theta, 4);
  if (theta.regular_count() != theta.nx() * theta.ny())
    throw DomainError("backlund_integrate: theta has masked nodes");
  if (seed.i < 0 || seed.i >= theta.nx() || seed.j < 0 || seed.j >= theta.ny())
    throw ParameterError("backlund_integrate: seed node outside the grid");
  if (!std::isfinite(seed.omega)) throw ParameterError("backlund_integrate: seed value must be finite");

  const auto th_x = deriv(theta, true, 4), th_y = deriv(theta, false, 4);
  const double hx = theta.geom.hx(), hy = theta.geom.hy();
  IntegrationResult r{RealGrid(theta.geom), RealGrid(theta.geom), 0, 0};
  std::vector<double> line, w;

  // rows first: the seed row, then every column
  integrate_line(row(theta, th_y, seed.j), seed.i, seed.omega, hx, slope_xi, line);
  for (int i = 0; i < theta.nx(); ++i) {
    integrate_line(column(theta, th_x, i), seed.j, line[i], hy, slope_eta, w);
    for (int j = 0; j < theta.ny(); ++j) r.omega(i, j) = w[j];
  }
  // columns first
  integrate_line(column(theta, th_x, seed.i), seed.j, seed.omega, hy, slope_eta, line);
  for (int j = 0; j < theta.ny(); ++j) {
    integrate_line(row(theta, th_y, j), seed.i, line[j], hx, slope_xi, w);
    for (int i = 0; i < theta.nx(); ++i) r.omega_alt(i, j) = w[i];
  }

  r.path_consistency = max_abs(difference(r.omega, r.omega_alt));
  r.sinh_gordon = sinh_gordon_residual(r.omega, 4);
  if (opt.throw_on_inconsistency && !(r.path_consistency <= opt.consistency_tol)) {
    std::ostringstream os;
    os << "backlund_integrate: path inconsistency " << r.path_consistency << " exceeds " << opt.consistency_tol
       << "; theta is not a sine-Gordon seed";
    throw DomainError(os.str());
  }
  return r;
}

// ------------------------------------------------------------ closed forms

double kink(double xi) { return std::asin(std::tanh(2 * xi)); }

RealGrid kink_grid(const GridGeometry& g, int sign) {
  return sample<double>(g, [sign](double x, double) { return sign * kink(x); });
}

const char* to_string(Branch b) { return b == Branch::A ? "A" : "B"; }

Flagged<double> closed_form_omega(Branch b, double xi, double eta) {
  const double c = std::cosh(2 * xi);
  const double arg = b == Branch::A ? c / (2 * eta) : 2 * eta / c;
  if (b == Branch::A && !(eta > 0)) return Flagged<double>::singular(std::numeric_limits<double>::quiet_NaN());
  if (!(std::abs(arg) < 1)) return Flagged<double>::singular(arg);
  return Flagged<double>::regular(2 * std::atanh(arg));
}

RealGrid closed_form_omega_grid(Branch b, const GridGeometry& g, int sign) {
  RealGrid out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const auto v = closed_form_omega(b, g.x(i), g.y(j));
      if (!v.ok()) {
        std::ostringstream os;
        os << "backlund: branch " << to_string(b) << " is not real at node (" << i << ", " << j << ")";
        throw DomainError(os.str());
      }
      out(i, j) = sign * v.value;
    }
  return out;
}

std::string BranchSelection::label() const {
  if (!found) return "none";
  std::ostringstream os;
  const char* sign = selected.omega_sign > 0 ? "+" : "-";
  os << to_string(selected.branch) << ": omega = " << sign
     << (selected.branch == Branch::A ? "2 artanh(cosh 2xi/(2 eta))" : "2 artanh(2 eta/cosh 2xi)")
     << ", theta = " << (selected.theta_sign > 0 ? "" : "-") << "arcsin tanh 2xi";
  return os.str();
}

BranchSelection select_branch(const GridGeometry& g, double tol, int order) {
  bool all_above = true, all_below = true;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double c = std::cosh(2 * g.x(i)) / 2, eta = g.y(j);
      all_above = all_above && eta > c;
      all_below = all_below && std::abs(eta) < c;
    }
  if (!all_above && !all_below)
    throw DomainError("backlund: grid straddles eta = cosh(2 xi)/2; no single real branch applies");
  const Branch b = all_above ? Branch::A : Branch::B;

  BranchSelection sel;
  sel.tolerance = tol;
  const RealGrid base = closed_form_omega_grid(b, g, 1);
  for (int ts : {1, -1})
    for (int os : {1, -1}) {
      Candidate c;
      c.branch = b;
      c.omega_sign = os;
      c.theta_sign = ts;
      RealGrid omega = base;
      omega.values *= os;
      c.sinh_gordon = sinh_gordon_residual(omega, order);
      const auto pr = backlund_residual_hyperbolic(kink_grid(g, ts), omega, order);
      c.r1 = pr.r1;
      c.r2 = pr.r2;
      c.pass = c.sinh_gordon < tol && c.r1 < tol && c.r2 < tol;
      if (c.pass && !sel.found) {
        sel.found = true;
        sel.selected = c;
      }
      sel.candidates.push_back(c);
    }
  return sel;
}

// ------------------------------------------------------------ example map

std::complex<double> example_u(double xi, double eta) {
  const double c = std::cosh(2 * xi);
  return {eta * eta * std::tanh(2 * xi) + xi / 2, eta * eta / c - c / 4};
}

ComplexGrid backlund_example_map(const GridGeometry& g) {
  std::vector<std::pair<int, int>> bad;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (!(g.y(j) > std::cosh(2 * g.x(i)) / 2)) bad.emplace_back(i, j);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "backlund example: eta > cosh(2 xi)/2 fails at " << bad.size() << " nodes, first ("
       << bad.front().first << ", " << bad.front().second << ")";
    throw DomainError(os.str());
  }
  return sample<std::complex<double>>(g, [](double x, double y) { return example_u(x, y); });
}

}  // namespace hmap::backlund
