#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hmap/beltrami.hpp"
#include "hmap/fd.hpp"
#include "hmap/mapgen.hpp"

using namespace hmap;
using namespace hmap::beltrami;

namespace {

// omega = -log tanh(xi): e^{-2 omega} = tanh^2(xi), with u = eta - (i/2) sinh(2 xi)
double litam_omega(double xi) { return -std::log(std::tanh(xi)); }
double litam_S(double xi) { return -0.5 * std::sinh(2 * xi); }
// Re(u^2) solves the same Beltrami equation (holomorphic post-composition)
double litam_R2(double xi, double eta) { return eta * eta - litam_S(xi) * litam_S(xi); }
double litam_S2(double xi, double eta) { return 2 * eta * litam_S(xi); }

RealGrid litam_omega_grid(const GridGeometry& g) {
  return sample<double>(g, [](double x, double) { return litam_omega(x); });
}

double solve_error_R2(int n) {
  const auto g = GridGeometry::make(n, n, 0.5, 1.5, 0.0, 1.0);
  SolveOptions opt;
  opt.tol = 1e-12;
  const auto res = solve_R(litam_omega_grid(g), BoundaryData::from_function(g, litam_R2), opt);
  REQUIRE(res.converged);
  const auto exact = sample<double>(g, litam_R2);
  return max_abs(difference(res.R, exact));
}

}  // namespace

TEST_CASE("constant omega and linear boundary data reproduce the linear solution") {
  const auto g = GridGeometry::make(33, 41, -1.0, 1.0, 0.0, 2.0);
  const auto omega = sample<double>(g, [](double, double) { return 0.7; });
  auto lin = [](double x, double y) { return 2 * x - 0.5 * y + 1; };
  const auto res = solve_R(omega, BoundaryData::from_function(g, lin));
  CHECK(res.converged);
  CHECK(max_abs(difference(res.R, sample<double>(g, lin))) < 1e-13);
}

TEST_CASE("omega depending on eta only keeps R = xi exact") {
  const auto g = GridGeometry::make(33, 33, 0.0, 1.0, 0.0, 1.0);
  const auto omega = sample<double>(g, [](double, double y) { return 0.4 + y; });
  BoundaryData bc = BoundaryData::from_function(g, [](double x, double) { return x; });
  const auto res = solve_R(omega, bc);
  CHECK(res.converged);
  CHECK(res.residual <= 1e-10);
  CHECK(max_abs(difference(res.R, sample<double>(g, [](double x, double) { return x; }))) < 1e-12);
}

TEST_CASE("Li-Tam coefficient with R = eta") {
  const auto g = GridGeometry::make(129, 129, 0.5, 1.5, 0.0, 1.0);
  const auto omega = litam_omega_grid(g);
  const auto res = solve_R(omega, BoundaryData::from_function(g, [](double, double y) { return y; }));
  CHECK(res.converged);
  const auto exact = sample<double>(g, [](double, double y) { return y; });
  CHECK(max_abs(difference(res.R, exact)) < 1e-3);
}

TEST_CASE("solution error shrinks about 4x per halving of h") {
  const double e33 = solve_error_R2(33), e65 = solve_error_R2(65), e129 = solve_error_R2(129);
  MESSAGE("errors " << e33 << " " << e65 << " " << e129);
  CHECK(e33 / e65 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e65 / e129 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(e129 < 1e-3);
}

TEST_CASE("SOR at 129 x 129 converges in a few thousand sweeps") {
  const auto g = GridGeometry::make(129, 129, 0.5, 1.5, 0.0, 1.0);
  const auto res = solve_R(litam_omega_grid(g), BoundaryData::from_function(g, litam_R2));
  CHECK(res.converged);
  CHECK(res.iterations > 100);
  CHECK(res.iterations < 20000);
  // diagonally scaled residual recomputed from scratch
  CHECK(max_abs(r_equation_residual(res.R, litam_omega_grid(g))) <= 1e-10);
}

TEST_CASE("non-convergence returns the partial iterate") {
  const auto g = GridGeometry::make(65, 65, 0.5, 1.5, 0.0, 1.0);
  SolveOptions opt;
  opt.max_iter = 5;
  const auto res = solve_R(litam_omega_grid(g), BoundaryData::from_function(g, litam_R2), opt);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 5);
  CHECK(res.residual > opt.tol);
}

TEST_CASE("coefficient singularities are rejected") {
  const auto g = GridGeometry::make(17, 17, -1.0, 1.0, 0.0, 1.0);
  const auto bc = BoundaryData::from_function(g, [](double x, double) { return x; });
  const auto crossing = sample<double>(g, [](double x, double) { return x + 0.03; });
  CHECK_THROWS_AS(solve_R(crossing, bc), DomainError);
  const auto tiny = sample<double>(g, [](double, double) { return 5e-4; });
  CHECK_THROWS_AS(solve_R(tiny, bc), DomainError);
  SolveOptions opt;
  opt.omega_floor = 1e-4;
  CHECK(solve_R(tiny, bc, opt).converged);
  auto masked = sample<double>(g, [](double, double) { return 1.0; });
  masked.mask(3, 4) = false;
  CHECK_THROWS_AS(solve_R(masked, bc), DomainError);
  const auto negative = sample<double>(g, [](double, double y) { return -0.5 - y; });
  CHECK(solve_R(negative, bc).converged);
}

TEST_CASE("boundary data must match the grid") {
  const auto g = GridGeometry::make(17, 17, 0.0, 1.0, 0.0, 1.0);
  const auto g2 = GridGeometry::make(17, 19, 0.0, 1.0, 0.0, 1.0);
  const auto bc = BoundaryData::from_function(g2, [](double x, double) { return x; });
  const auto omega = sample<double>(g, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(solve_R(omega, bc), ParameterError);
}

TEST_CASE("discrete maximum principle") {
  const auto g = GridGeometry::make(41, 41, 0.3, 1.3, 0.0, 1.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  BoundaryData bc = BoundaryData::from_function(g, [&](double, double) { return U(rng); });
  const auto omega = sample<double>(g, [](double x, double y) { return 0.2 + x * x + 0.15 * std::sin(4 * y); });
  const auto res = solve_R(omega, bc);
  REQUIRE(res.converged);
  const double bmax = std::max({bc.south.maxCoeff(), bc.north.maxCoeff(), bc.west.maxCoeff(), bc.east.maxCoeff()});
  const double bmin = std::min({bc.south.minCoeff(), bc.north.minCoeff(), bc.west.minCoeff(), bc.east.minCoeff()});
  CHECK(res.R.values.maxCoeff() <= bmax + 1e-12);
  CHECK(res.R.values.minCoeff() >= bmin - 1e-12);
}

TEST_CASE("solver is deterministic") {
  const auto g = GridGeometry::make(49, 49, 0.5, 1.5, 0.0, 1.0);
  const auto bc = BoundaryData::from_function(g, litam_R2);
  const auto a = solve_R(litam_omega_grid(g), bc), b = solve_R(litam_omega_grid(g), bc);
  CHECK(a.iterations == b.iterations);
  CHECK((a.R.values == b.R.values).all());
}

TEST_CASE("reconstruct_S with constant omega") {
  const double c = 0.8;
  const auto g = GridGeometry::make(21, 31, 0.0, 1.0, -1.0, 2.0);
  const auto omega = sample<double>(g, [&](double, double) { return c; });
  const auto R = sample<double>(g, [](double x, double) { return x; });
  const auto rec = reconstruct_S(R, omega, 4, 7, 0.25);
  const auto exact = sample<double>(g, [&](double, double y) { return std::tanh(c) * (y - g.y(7)) + 0.25; });
  CHECK(max_abs(difference(rec.S, exact)) < 1e-13);
  CHECK(rec.compatibility < 1e-12);
}

TEST_CASE("reconstruct_S on the Li-Tam pair") {
  const auto g = GridGeometry::make(129, 129, 0.5, 1.5, 0.0, 1.0);
  const auto omega = litam_omega_grid(g);
  const auto res = solve_R(omega, BoundaryData::from_function(g, [](double, double y) { return y; }));
  const auto rec = reconstruct_S(res.R, omega, 0, 0, litam_S(0.5));
  const auto exact = sample<double>(g, [](double x, double) { return litam_S(x); });
  CHECK(max_abs(difference(rec.S, exact)) < 1e-3);
  CHECK(rec.compatibility < 1e-4);
}

TEST_CASE("solved pair is orthogonal up to FD truncation") {
  const int n = 129;
  const auto g = GridGeometry::make(n, n, 0.5, 1.5, 0.0, 1.0);
  const auto omega = litam_omega_grid(g);
  SolveOptions opt;
  opt.tol = 1e-12;
  const auto res = solve_R(omega, BoundaryData::from_function(g, litam_R2), opt);
  const auto rec = reconstruct_S(res.R, omega, 0, 0, litam_S2(0.5, 0.0));
  CHECK(max_abs(difference(rec.S, sample<double>(g, litam_S2))) < 1e-2);
  const auto Rx = fd::diff_x(res.R), Ry = fd::diff_y(res.R);
  const auto Sx = fd::diff_x(rec.S), Sy = fd::diff_y(rec.S);
  const double tol_fd = std::max(1e-8, 10 * g.hx() * g.hx());
  // cosine of the angle between u_xi and u_eta; nodes next to the edges are
  // skipped because S there is integrated from one-sided normal derivatives
  double orth = 0;
  for (int j = 2; j < n - 2; ++j)
    for (int i = 2; i < n - 2; ++i) {
      const double dot = Rx(i, j) * Ry(i, j) + Sx(i, j) * Sy(i, j);
      const double nx = std::hypot(Rx(i, j), Sx(i, j)), ny = std::hypot(Ry(i, j), Sy(i, j));
      orth = std::max(orth, std::abs(dot) / (nx * ny));
    }
  MESSAGE("orthogonality cosine " << orth);
  CHECK(orth < 10 * tol_fd);
}

TEST_CASE("Beltrami residual of the Li-Tam pair is central-difference truncation") {
  // leading term: |res| = (2 h^2 / 3) coth(2 xi), from the sinh(2 xi) third derivative
  for (int n : {201, 401}) {
    const auto g = GridGeometry::make(n, n, 0.5, 1.5, 0.0, 1.0);
    const auto u = sample<std::complex<double>>(
        g, [](double x, double y) { return std::complex<double>(y, litam_S(x)); });
    const auto field = beltrami_residual_field(u, litam_omega_grid(g));
    const double h = g.hx();
    double worst = 0;
    for (int j = 1; j < n - 1; ++j)
      for (int i = 1; i < n - 1; ++i) {
        const double lead = 2 * h * h / 3 / std::tanh(2 * g.x(i));
        worst = std::max(worst, std::abs(std::abs(field(i, j)) / lead - 1));
      }
    CHECK(worst < 0.01);
    if (n == 401) CHECK(beltrami_residual(u, litam_omega_grid(g)) < 1e-5);
  }
}

TEST_CASE("Beltrami residual of a holomorphic map is e^{-omega} |u_z|") {
  // central differences of z^2 are exact, so the residual is exactly e^{-omega} |2 z|
  const auto g = GridGeometry::make(51, 51, 0.0, 1.0, 0.0, 1.0);
  const auto u = sample<std::complex<double>>(g, [](double x, double y) {
    const std::complex<double> z(x, y);
    return z * z;
  });
  const auto omega = sample<double>(g, [](double, double) { return 0.5; });
  const double expected = std::exp(-0.5) * 2 * std::abs(std::complex<double>(g.x(49), g.y(49)));
  CHECK(beltrami_residual(u, omega) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("Beltrami residual of a one-soliton map") {
  using namespace hmap::mapgen;
  const auto mp = MapParams::make(soliton::SolitonParams::make(1, 1.0, 0.5, 0.0, 0.4, 0.6), 1.0);
  const auto g = GridGeometry::make(201, 201, 0.0, 1.0, 0.5, 1.5);
  const MapGrid mg = sample_map(mp, g);
  REQUIRE(mg.u.regular_count() == g.nx * g.ny);
  const double r = beltrami_residual(mg.u, mg.omega);
  MESSAGE("soliton residual " << r);
  CHECK(r < 1e-5);
}
