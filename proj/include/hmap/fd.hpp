#pragma once

// Second-order finite differences on FieldGrid. Central stencils in the
// interior, one-sided second-order stencils on the edges. A derived node is
// regular only when every node of its stencil is regular.

#include <complex>

#include "hmap/grid.hpp"

namespace hmap::fd {

namespace detail {

template <class Scalar, bool AlongX>
FieldGrid<Scalar> first_derivative(const FieldGrid<Scalar>& f) {
  const GridGeometry& g = f.geom;
  FieldGrid<Scalar> out(g);
  const int n = AlongX ? g.nx : g.ny;
  const double h = AlongX ? g.hx() : g.hy();
  auto at = [&](int i, int j, int k) -> const Scalar& { return AlongX ? f(k, j) : f(i, k); };
  auto ok = [&](int i, int j, int k) { return AlongX ? f.mask(k, j) : f.mask(i, k); };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int k = AlongX ? i : j;
      int a, b, c;
      Scalar v;
      if (k == 0) {
        a = 0, b = 1, c = 2;
        v = (-3.0 * at(i, j, a) + 4.0 * at(i, j, b) - at(i, j, c)) / (2 * h);
      } else if (k == n - 1) {
        a = n - 3, b = n - 2, c = n - 1;
        v = (at(i, j, a) - 4.0 * at(i, j, b) + 3.0 * at(i, j, c)) / (2 * h);
      } else {
        a = k - 1, b = k, c = k + 1;
        v = (at(i, j, c) - at(i, j, a)) / (2 * h);
      }
      out(i, j) = v;
      out.mask(i, j) = ok(i, j, a) && ok(i, j, b) && ok(i, j, c);
    }
  }
  return out;
}

}  // namespace detail

template <class Scalar>
FieldGrid<Scalar> diff_x(const FieldGrid<Scalar>& f) {
  return detail::first_derivative<Scalar, true>(f);
}

template <class Scalar>
FieldGrid<Scalar> diff_y(const FieldGrid<Scalar>& f) {
  return detail::first_derivative<Scalar, false>(f);
}

/// Five-point Laplacian; boundary nodes are masked.
template <class Scalar>
FieldGrid<Scalar> laplacian(const FieldGrid<Scalar>& f) {
  const GridGeometry& g = f.geom;
  FieldGrid<Scalar> out(g);
  const double ihx2 = 1 / (g.hx() * g.hx()), ihy2 = 1 / (g.hy() * g.hy());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) {
        out.mask(i, j) = false;
        continue;
      }
      out(i, j) = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) * ihx2 +
                  (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) * ihy2;
      out.mask(i, j) = f.mask(i, j) && f.mask(i + 1, j) && f.mask(i - 1, j) && f.mask(i, j + 1) &&
                       f.mask(i, j - 1);
    }
  return out;
}

struct Wirtinger {
  ComplexGrid d_z;
  ComplexGrid d_zbar;
};

/// d_z = (d_x - i d_y)/2, d_zbar = (d_x + i d_y)/2.
template <class Scalar>
Wirtinger wirtinger(const FieldGrid<Scalar>& f) {
  const auto fx = diff_x(f);
  const auto fy = diff_y(f);
  Wirtinger w{ComplexGrid(f.geom), ComplexGrid(f.geom)};
  const std::complex<double> I(0, 1);
  for (int j = 0; j < f.ny(); ++j)
    for (int i = 0; i < f.nx(); ++i) {
      const std::complex<double> a(fx(i, j)), b(fy(i, j));
      w.d_z(i, j) = 0.5 * (a - I * b);
      w.d_zbar(i, j) = 0.5 * (a + I * b);
    }
  w.d_z.mask = fx.mask && fy.mask;
  w.d_zbar.mask = w.d_z.mask;
  return w;
}

/// u_{z zbar} = Laplacian / 4.
template <class Scalar>
FieldGrid<Scalar> d_zzbar(const FieldGrid<Scalar>& f) {
  auto out = laplacian(f);
  out.values *= 0.25;
  return out;
}

}  // namespace hmap::fd
