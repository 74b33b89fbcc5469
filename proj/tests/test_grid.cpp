#include "doctest.h"

#include <cmath>

#include "wavemaps/grid.hpp"

using namespace wavemaps;

namespace {
NullGrid small_grid() {
  NullGrid g;
  g.u0 = g.v0 = -1.0;
  g.h = 0.1;
  g.nu = g.nv = 21;
  return g;
}
} // namespace

TEST_CASE("lattice geometry: t = (u-v)/2, x = (u+v)/2, t=0 on the main diagonal") {
  NullGrid g = small_grid();
  CHECK(g.t(5, 5) == doctest::Approx(0.0));
  CHECK(g.t(7, 5) == doctest::Approx(g.h));
  CHECK(g.x(7, 5) == doctest::Approx(0.5 * (g.u(7) + g.v(5))));
}

TEST_CASE("difference stencils hit polynomials exactly") {
  NullGrid g = small_grid();
  GridField F(g, 1);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) F.at(i, j)[0] = g.u(i) * g.u(i) + 3.0 * g.u(i) * g.v(j);
  double d;
  F.du_at(10, 10, &d);
  CHECK(d == doctest::Approx(2 * g.u(10) + 3 * g.v(10)).epsilon(1e-12));
  F.dv_at(10, 10, &d);
  CHECK(d == doctest::Approx(3 * g.u(10)).epsilon(1e-12));
  F.duv_at(10, 10, &d);
  CHECK(d == doctest::Approx(3.0).epsilon(1e-12));
  // one-sided edge stencils are 2nd order: exact on quadratics in one variable
  F.du_at(0, 10, &d);
  CHECK(d == doctest::Approx(2 * g.u(0) + 3 * g.v(10)).epsilon(1e-10));
  CHECK_THROWS(F.duv_at(0, 0, &d));
}

TEST_CASE("time_slice walks a constant-t diagonal") {
  NullGrid g = small_grid();
  GridField F(g, 2);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) {
      F.at(i, j)[0] = g.x(i, j);
      F.at(i, j)[1] = g.t(i, j);
    }
  auto s = F.time_slice(4); // t = 2h
  REQUIRE(s.size() >= 4);
  for (size_t k = 0; k + 1 < s.size() / 2; ++k) {
    CHECK(s[2 * k + 1] == doctest::Approx(2 * g.h)); // constant t along the slice
    CHECK(s[2 * (k + 1)] - s[2 * k] == doctest::Approx(g.h)); // x spacing h
  }
}

TEST_CASE("hash_region: sensitive to payload, stable under recomputation") {
  NullGrid g = small_grid();
  GridField F(g, 1);
  for (int i = 0; i < g.nu; ++i)
    for (int j = 0; j < g.nv; ++j) F.at(i, j)[0] = std::sin(i * 0.3 + j * 0.7);
  uint64_t h1 = F.hash_region(3, 10, 3, 10);
  CHECK(h1 == F.hash_region(3, 10, 3, 10));
  GridField G2 = F;
  G2.at(5, 5)[0] = std::nextafter(G2.at(5, 5)[0], 1.0); // single-bit flip
  CHECK(h1 != G2.hash_region(3, 10, 3, 10));
  // region not containing the flipped node is unaffected
  CHECK(F.hash_region(6, 10, 3, 10) == G2.hash_region(6, 10, 3, 10));
}

TEST_CASE("CauchyData interpolation: cubic exactness, constant/zero extension") {
  auto f = [](double x, double* out) { out[0] = x * x * x - 2 * x; };
  auto g = [](double x, double* out) { out[0] = x; };
  CauchyData d = CauchyData::sample(1, -1.0, 0.05, 41, f, g);
  double val;
  d.f_at(0.3271, &val);
  CHECK(val == doctest::Approx(0.3271 * 0.3271 * 0.3271 - 2 * 0.3271).epsilon(1e-12));
  d.f_at(57.0, &val); // constant extension by the boundary value
  CHECK(val == doctest::Approx(1.0 * 1.0 * 1.0 - 2.0));
  d.g_at(57.0, &val); // zero extension for the velocity
  CHECK(val == 0.0);
  // node queries hit samples exactly
  d.f_at(-1.0 + 7 * 0.05, &val);
  CHECK(val == d.f[7]);
}

TEST_CASE("resampled onto the same lattice is an exact copy") {
  auto f = [](double x, double* out) { out[0] = std::sin(3 * x); };
  auto g = [](double, double* out) { out[0] = 0.25; };
  CauchyData d = CauchyData::sample(1, -2.0, 0.01, 401, f, g);
  CauchyData r = d.resampled(-2.0, 0.01, 401);
  for (int k = 0; k < r.n(); ++k) {
    CHECK(r.f[k] == d.f[k]);
    CHECK(r.g[k] == d.g[k]);
  }
}
