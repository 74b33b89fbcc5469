#include "doctest.h"

#include <cmath>
#include <vector>

#include "wavemaps/geometry.hpp"

using namespace wavemaps;

TEST_CASE("extrinsic sphere: Gamma(phi)(X,Y) = phi (X.Y) at unit base points") {
  TargetManifold M = sphere_extrinsic(2);
  Vec p = {1.0, 0.0}, X = {0.0, 1.0}, Y = {0.0, 1.0}, out(2);
  M.gamma_at(p, X, Y, out);
  CHECK(out[0] == doctest::Approx(1.0)); // unit dot product times base point
  CHECK(out[1] == doctest::Approx(0.0));

  // symmetry of the connection at a generic point
  TargetManifold S3 = sphere_extrinsic(3);
  Vec q = {0.6, 0.8, 0.0}, A = {0.1, -0.2, 0.5}, B = {-0.3, 0.4, 0.2}, g1(3), g2(3);
  S3.gamma_at(q, A, B, g1);
  S3.gamma_at(q, B, A, g2);
  for (int c = 0; c < 3; ++c) CHECK(g1[c] == doctest::Approx(g2[c]).epsilon(1e-14));
}

TEST_CASE("extrinsic sphere: retraction is radial normalization, idempotent") {
  TargetManifold M = sphere_extrinsic(3);
  Vec p = {3.0, 0.0, 4.0};
  M.retract(p.data());
  CHECK(p[0] == doctest::Approx(0.6));
  CHECK(p[2] == doctest::Approx(0.8));
  Vec q = p;
  M.retract(q.data());
  for (int c = 0; c < 3; ++c) CHECK(q[c] == p[c]); // idempotent on the image
}

TEST_CASE("sphere_extrinsic rejects m < 2") {
  CHECK_THROWS(sphere_extrinsic(1));
}

TEST_CASE("intrinsic circle: flat chart, vanishing Christoffel symbols") {
  TargetManifold M = circle_intrinsic();
  Vec p = {0.7}, X = {2.0}, Y = {-3.0}, out(1);
  M.gamma_at(p, X, Y, out);
  CHECK(out[0] == 0.0);
  Vec h(1);
  M.metric(p.data(), h.data());
  CHECK(h[0] == 1.0);
}

TEST_CASE("stereographic sphere chart: metric and symbols match the round sphere") {
  TargetManifold M = sphere_stereographic();
  // at the origin of the chart the metric is 4 * identity
  Vec p = {0.0, 0.0};
  Vec h(4);
  M.metric(p.data(), h.data());
  CHECK(h[0] == doctest::Approx(4.0));
  CHECK(h[1] == doctest::Approx(0.0));
  CHECK(h[3] == doctest::Approx(4.0));

  // Christoffel contraction against the closed form
  // Gamma^k(X,Y) = -2/(1+r^2) (X^k (x.Y) + (x.X) Y^k - x^k (X.Y))
  Vec q = {0.3, -0.5}, X = {1.0, 2.0}, Y = {-0.7, 0.4}, out(2);
  M.gamma_at(q, X, Y, out);
  double r2 = q[0] * q[0] + q[1] * q[1];
  double c = -2.0 / (1.0 + r2);
  double xY = q[0] * Y[0] + q[1] * Y[1];
  double xX = q[0] * X[0] + q[1] * X[1];
  double XY = X[0] * Y[0] + X[1] * Y[1];
  for (int k = 0; k < 2; ++k)
    CHECK(out[k] == doctest::Approx(c * (X[k] * xY + xX * Y[k] - q[k] * XY)).epsilon(1e-13));
}

TEST_CASE("metric lengths: definiteness and the stereographic conformal factor") {
  TargetManifold M = sphere_stereographic();
  Vec p = {0.2, 0.1}, X = {0.3, -0.4};
  double len = metric_length(M, p, X);
  CHECK(len > 0);
  double r2 = p[0] * p[0] + p[1] * p[1];
  double expect = 2.0 / (1.0 + r2) * std::hypot(X[0], X[1]);
  CHECK(len == doctest::Approx(expect).epsilon(1e-13));
  Vec zero = {0.0, 0.0};
  CHECK(metric_length(M, p, zero) == 0.0);
}

TEST_CASE("power series evaluation: geometric series with certified truncation") {
  // f(x) = sum_k x^k = 1/(1-x), dim 1, growth constants C = 1, rho = 1/2
  PowerSeries ps;
  ps.dim = 1;
  ps.growth_C = 1.0;
  ps.radius = 0.5;
  for (int k = 0; k <= 60; ++k) {
    PowerSeries::Term t;
    t.exps = {k};
    t.coeff = 1.0;
    ps.terms.push_back(t);
  }
  Vec x = {0.25};
  CHECK(ps.eval(x) == doctest::Approx(1.0 / (1.0 - 0.25)).epsilon(1e-10));
  Vec bad = {0.75};
  CHECK_THROWS_AS(ps.eval(bad), std::domain_error);
}

TEST_CASE("analytic chart wraps series-based metric and symbols") {
  // flat chart of dimension 1 via series: h = 1, Gamma = 0
  std::vector<PowerSeries> metric(1), gamma(1);
  PowerSeries one;
  one.dim = 1;
  one.growth_C = 1.0;
  one.radius = 10.0;
  PowerSeries::Term c0;
  c0.exps = {0};
  c0.coeff = 1.0;
  one.terms.push_back(c0);
  metric[0] = one;
  PowerSeries zero = one;
  zero.terms.clear();
  gamma[0] = zero;
  TargetManifold M = analytic_chart(1, metric, gamma);
  Vec p = {0.3}, X = {2.0}, out(1);
  M.gamma_at(p, X, X, out);
  CHECK(out[0] == 0.0);
  CHECK(metric_length(M, p, X) == doctest::Approx(2.0));
}
