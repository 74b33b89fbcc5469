#include "doctest.h"

#include <cmath>
#include <vector>

#include "wavemaps/oracles.hpp"
#include "wavemaps/solver.hpp"

using namespace wavemaps;

namespace {

CauchyData s1_data(double h, double T, double reach = 4.0) {
  S1Exact ex = s1_exact(ScalarProfile::gaussian());
  double x0 = -reach - T - 1;
  int n = (int)std::lround(2 * (reach + T + 1) / (h / 2)) + 1;
  return ex.data(x0, h / 2, n);
}

double s1_sup_error(const SolveResult& res, int band_used) {
  S1Exact ex = s1_exact(ScalarProfile::gaussian());
  double err = 0;
  double exact[2];
  const NullGrid& g = res.phi.grid;
  for (int i = 0; i < g.nu; ++i)
    for (int j = std::max(0, i - band_used); j <= std::min(g.nv - 1, i + band_used); ++j) {
      ex.value(g.u(i), g.v(j), exact);
      const double* p = res.phi.at(i, j);
      err = std::max(err, std::hypot(p[0] - exact[0], p[1] - exact[1]));
    }
  return err;
}

} // namespace

TEST_CASE("characteristic data: phi_u = (f' + g)/2, phi_v = (f' - g)/2") {
  auto f = [](double x, double* out) { out[0] = std::sin(x); };
  auto g = [](double x, double* out) { out[0] = std::cos(2 * x); };
  CauchyData d = CauchyData::sample(1, -3.0, 0.01, 601, f, g);
  CharacteristicData cd = cauchy_to_characteristic(d);
  int k = 300; // x = 0
  CHECK(cd.phi_u[k] == doctest::Approx(0.5 * (std::cos(0.0) + 1.0)).epsilon(1e-8));
  CHECK(cd.phi_v[k] == doctest::Approx(0.5 * (std::cos(0.0) - 1.0)).epsilon(1e-8));
}

TEST_CASE("advance_cell with vanishing symbols is the exact parallelogram rule") {
  TargetManifold M = circle_intrinsic();
  double p00 = 1.0, p10 = 2.5, p01 = -0.75, p11 = 0.0;
  advance_cell(M, 0.1, &p00, &p10, &p01, &p11, false);
  CHECK(p11 == doctest::Approx(p10 + p01 - p00));
}

TEST_CASE("dalembert_free: classical d'Alembert formula and discrete phi_uv == 0") {
  NullGrid grid;
  grid.u0 = grid.v0 = -3.0;
  grid.h = 0.05;
  grid.nu = grid.nv = 121;

  SUBCASE("g == 0 gives the average of translates") {
    auto f = [](double x, double* out) { out[0] = std::exp(-x * x); };
    auto g = [](double, double* out) { out[0] = 0.0; };
    CauchyData d = CauchyData::sample(1, -8.0, 0.05, 321, f, g);
    GridField phi = dalembert_free(d, grid);
    for (int i = 5; i < grid.nu - 5; i += 7)
      for (int j = 5; j < grid.nv - 5; j += 7) {
        double expect = 0.5 * (std::exp(-grid.u(i) * grid.u(i)) +
                               std::exp(-grid.v(j) * grid.v(j)));
        CHECK(phi.at(i, j)[0] == doctest::Approx(expect).epsilon(1e-9));
      }
  }

  SUBCASE("f == 0, g == 1 gives phi = t where g covers the cone") {
    auto f = [](double, double* out) { out[0] = 0.0; };
    auto g = [](double, double* out) { out[0] = 1.0; };
    CauchyData d = CauchyData::sample(1, -20.0, 0.05, 801, f, g);
    GridField phi = dalembert_free(d, grid);
    CHECK(phi.at(70, 50)[0] == doctest::Approx(grid.t(70, 50)).epsilon(1e-10));
    CHECK(phi.at(40, 60)[0] == doctest::Approx(grid.t(40, 60)).epsilon(1e-10));
  }

  SUBCASE("random smooth data: lattice mixed difference vanishes identically") {
    auto f = [](double x, double* out) { out[0] = std::sin(2 * x) + 0.3 * std::cos(5 * x); };
    auto g = [](double x, double* out) { out[0] = std::cos(3 * x); };
    CauchyData d = CauchyData::sample(1, -8.0, 0.05, 321, f, g);
    GridField phi = dalembert_free(d, grid);
    double worst = 0;
    for (int i = 0; i + 1 < grid.nu; ++i)
      for (int j = 0; j + 1 < grid.nv; ++j)
        worst = std::max(worst, std::abs(phi.at(i + 1, j + 1)[0] - phi.at(i + 1, j)[0] -
                                         phi.at(i, j + 1)[0] + phi.at(i, j)[0]));
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("inverse_box: zero forcing, closed form, and the exact inversion property") {
  NullGrid grid;
  grid.u0 = grid.v0 = -2.0;
  grid.h = 0.05;
  grid.nu = grid.nv = 81;

  SUBCASE("F == 0 -> phi == 0") {
    CellField F(grid, 1);
    GridField W = inverse_box(F);
    for (double v : W.data) CHECK(v == 0.0);
  }

  SUBCASE("F == 1 -> phi = -(u-v)^2/2 = -2 t^2") {
    CellField F(grid, 1);
    for (auto& v : F.data) v = 1.0;
    GridField W = inverse_box(F);
    for (int i = 0; i < grid.nu; i += 5)
      for (int j = 0; j < grid.nv; j += 5) {
        double uv = grid.u(i) - grid.v(j);
        CHECK(W.at(i, j)[0] == doctest::Approx(-0.5 * uv * uv).epsilon(1e-10));
      }
  }

  SUBCASE("discrete mixed difference reproduces arbitrary forcing exactly") {
    CellField F(grid, 1);
    for (int i = 0; i + 1 < grid.nu; ++i)
      for (int j = 0; j + 1 < grid.nv; ++j)
        F.at(i, j)[0] = std::sin(1.7 * i) * std::cos(0.9 * j) + 0.2;
    GridField W = inverse_box(F);
    double h2 = grid.h * grid.h, worst = 0;
    for (int i = 0; i + 1 < grid.nu; ++i)
      for (int j = 0; j + 1 < grid.nv; ++j) {
        double mixed = (W.at(i + 1, j + 1)[0] - W.at(i + 1, j)[0] - W.at(i, j + 1)[0] +
                        W.at(i, j)[0]) / h2;
        worst = std::max(worst, std::abs(mixed - F.at(i, j)[0]));
      }
    CHECK(worst <= 1e-9);
    // zero Cauchy data: vanishes with first differences on t = 0
    for (int i = 1; i < grid.nu - 1; ++i) {
      CHECK(W.at(i, i)[0] == 0.0);
      // zero time derivative to seeding order: |W(t=h/2)+W(t=-h/2)| = O(h^2)
      CHECK(std::abs(W.at(i, i - 1)[0] + W.at(i - 1, i)[0]) <= 4 * grid.h * grid.h);
    }
  }
}

TEST_CASE("solve matches the closed-form S^1 wave map at second order") {
  TargetManifold M = sphere_extrinsic(2);
  double T = 0.5;
  SolveResult r1 = solve(s1_data(0.04, T), M, T, 0.04);
  SolveResult r2 = solve(s1_data(0.02, T), M, T, 0.02);
  double e1 = s1_sup_error(r1, r1.band);
  double e2 = s1_sup_error(r2, r2.band);
  CHECK(e1 < 2e-3);
  double ratio = e1 / e2;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("Duhamel identity: phi = S(f,g) + Box^{-1} phi_uv on the lattice") {
  TargetManifold M = sphere_extrinsic(2);
  double T = 0.4, h = 0.02;
  CauchyData data = s1_data(h, T);
  SolveResult res = solve(data, M, T, h);
  const NullGrid& g = res.phi.grid;
  // cell forcing = discrete mixed difference of the computed solution
  CellField F(g, 2);
  for (int i = 0; i + 1 < g.nu; ++i)
    for (int j = 0; j + 1 < g.nv; ++j)
      for (int c = 0; c < 2; ++c)
        F.at(i, j)[c] = (res.phi.at(i + 1, j + 1)[c] - res.phi.at(i + 1, j)[c] -
                         res.phi.at(i, j + 1)[c] + res.phi.at(i, j)[c]) /
                        (h * h);
  GridField free_part = dalembert_free(data, g);
  GridField duhamel = inverse_box(F);
  double worst = 0;
  for (int i = 2; i < g.nu - 2; ++i)
    for (int j = std::max(2, i - res.band + 2); j <= std::min(g.nv - 3, i + res.band - 2);
         ++j)
      for (int c = 0; c < 2; ++c)
        worst = std::max(worst, std::abs(res.phi.at(i, j)[c] - free_part.at(i, j)[c] -
                                         duhamel.at(i, j)[c]));
  // free part and inverse box reassemble the solution to seeding accuracy
  CHECK(worst < 5e-3);
}

TEST_CASE("exact lattice causality: perturbation outside [a,b] leaves the diamond bits") {
  TargetManifold M = sphere_extrinsic(2);
  double T = 0.4, h = 0.02;
  CauchyData data = s1_data(h, T);
  CauchyData pert = data;
  // perturb f and g outside [-1.2, 1.2] (tangentially, then renormalize f)
  for (int k = 0; k < pert.n(); ++k) {
    double x = pert.x0 + k * pert.dx;
    if (std::abs(x) > 1.2) {
      double* f = &pert.f[(size_t)k * 2];
      double* gk = &pert.g[(size_t)k * 2];
      f[0] += 0.01 * std::sin(3 * x);
      double nrm = std::hypot(f[0], f[1]);
      f[0] /= nrm;
      f[1] /= nrm;
      gk[1] += 0.02;
    }
  }
  SolveResult a = solve(data, M, T, h);
  SolveResult b = solve(pert, M, T, h);
  REQUIRE(a.phi.grid.nu == b.phi.grid.nu);
  // diamond of dependence over [a,b] = [-1.2, 1.2]: nodes with
  // a + |t| <= x... in null coordinates: u in [-1.2+?, ...]; conservative:
  // u >= -1.2 + h, u <= 1.2 - h, v likewise, |t| <= T
  const NullGrid& g = a.phi.grid;
  int i_lo = (int)std::ceil((-1.2 + 2 * h - g.u0) / h);
  int i_hi = (int)std::floor((1.2 - 2 * h - g.u0) / h);
  bool identical = true;
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = std::max(i_lo, i - a.band); j <= std::min(i_hi, i + a.band); ++j)
      for (int c = 0; c < 2; ++c)
        if (a.phi.at(i, j)[c] != b.phi.at(i, j)[c]) identical = false;
  CHECK(identical);
  CHECK(a.phi.hash_region(i_lo, i_hi, i_lo, i_hi) == b.phi.hash_region(i_lo, i_hi, i_lo, i_hi));
}

TEST_CASE("blowup guard trips and reports a location") {
  TargetManifold M = sphere_extrinsic(2);
  double T = 0.5, h = 0.02;
  CauchyData data = s1_data(h, T);
  SolveOptions opts;
  opts.blowup_ceiling = 1e-3; // everything trips immediately
  CHECK_THROWS_AS(solve(data, M, T, h, opts), BlowupError);
}

TEST_CASE("picard iteration: free data converges immediately, small data contracts") {
  TargetManifold M = sphere_stereographic();
  double T = 0.5, h = 0.02;

  SUBCASE("zero data is a fixed point") {
    auto zf = [](double, double* out) { out[0] = out[1] = 0.0; };
    CauchyData d = CauchyData::sample(2, -3.0, h / 2, (int)(12 / h) + 1, zf, zf);
    PicardResult pr = picard_iterate(d, M, T, h);
    CHECK(pr.converged);
    CHECK(pr.iterations <= 2);
  }

  SUBCASE("small chart data: geometric X-norm ratios, rapid convergence") {
    auto f = [](double x, double* out) {
      out[0] = 0.02 * std::exp(-x * x);
      out[1] = 0.0;
    };
    auto g = [](double x, double* out) {
      out[0] = 0.0;
      out[1] = 0.01 * std::exp(-x * x);
    };
    CauchyData d = CauchyData::sample(2, -3.0, h / 2, (int)(12 / h) + 1, f, g);
    PicardResult pr = picard_iterate(d, M, T, h);
    CHECK(pr.converged);
    CHECK_FALSE(pr.diverged);
    CHECK(pr.iterations <= 12);
    for (size_t k = 1; k < pr.x_ratios.size(); ++k) CHECK(pr.x_ratios[k] <= 0.5);
  }
}
