#include "wavemaps/geometry.hpp"

#include <algorithm>
#include <memory>

namespace wavemaps {

double PowerSeries::eval(const Vec& x, double tol) const {
  double nx = 0;
  for (double xi : x) nx = std::max(nx, std::abs(xi));
  // certificate measures |x| in sup norm of the polydisk
  double rho = nx / radius;
  if (rho >= 1.0)
    throw std::domain_error("PowerSeries::eval: point outside certified radius");

  // choose truncation degree K so the tail bound
  //   C * sum_{k>K} n_k rho^k,  n_k = #{multi-indices of degree k}
  // drops below tol; n_k <= (k+1)^{dim-1}
  int K = 0;
  double tail = 0;
  for (K = 0; K < 512; ++K) {
    tail = 0;
    double rk = std::pow(rho, K + 1);
    for (int k = K + 1; k < K + 2000; ++k) {
      double nk = std::pow(double(k + 1), dim - 1);
      tail += growth_C * nk * rk;
      rk *= rho;
      if (growth_C * nk * rk < tol * 1e-4) break;
    }
    if (tail < tol) break;
  }
  if (tail >= tol)
    throw std::domain_error("PowerSeries::eval: cannot certify tolerance at this point");

  double s = 0;
  for (const auto& t : terms) {
    int deg = 0;
    for (int e : t.exps) deg += e;
    if (deg > K) continue;
    double m = t.coeff;
    for (int d = 0; d < dim; ++d)
      for (int e = 0; e < t.exps[d]; ++e) m *= x[d];
    s += m;
  }
  return s;
}

double metric_length(const TargetManifold& M, const double* p, const double* X) {
  int d = M.dim;
  std::vector<double> h(d * d);
  M.metric(p, h.data());
  double q = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) q += h[a * d + b] * X[a] * X[b];
  return std::sqrt(std::max(q, 0.0));
}

TargetManifold sphere_extrinsic(int m) {
  if (m < 2) throw std::invalid_argument("sphere_extrinsic: ambient dimension must be >= 2");
  TargetManifold M;
  M.name = "sphere_extrinsic(" + std::to_string(m) + ")";
  M.dim = m;
  M.metric = [m](const double*, double* h) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) h[a * m + b] = (a == b) ? 1.0 : 0.0;
  };
  M.gamma = [m](const double* p, const double* X, const double* Y, double* out) {
    double dot = 0;
    for (int a = 0; a < m; ++a) dot += X[a] * Y[a];
    for (int a = 0; a < m; ++a) out[a] = p[a] * dot;
  };
  M.retract = [m](double* p) {
    double n = 0;
    for (int a = 0; a < m; ++a) n += p[a] * p[a];
    n = std::sqrt(n);
    if (n > 0)
      for (int a = 0; a < m; ++a) p[a] /= n;
  };
  M.has_retraction = true;
  return M;
}

TargetManifold circle_intrinsic() {
  TargetManifold M;
  M.name = "circle_intrinsic";
  M.dim = 1;
  M.metric = [](const double*, double* h) { h[0] = 1.0; };
  M.gamma = [](const double*, const double*, const double*, double* out) { out[0] = 0.0; };
  M.has_retraction = false;
  return M;
}

TargetManifold sphere_stereographic() {
  TargetManifold M;
  M.name = "sphere_stereographic";
  M.dim = 2;
  M.metric = [](const double* p, double* h) {
    double r2 = p[0] * p[0] + p[1] * p[1];
    double c = 4.0 / ((1.0 + r2) * (1.0 + r2));
    h[0] = c; h[1] = 0; h[2] = 0; h[3] = c;
  };
  // Gamma^k_{ab} = -2 (delta_{ka} x_b + delta_{kb} x_a - delta_{ab} x_k) / (1+|x|^2)
  M.gamma = [](const double* p, const double* X, const double* Y, double* out) {
    double r2 = p[0] * p[0] + p[1] * p[1];
    double c = -2.0 / (1.0 + r2);
    double xy = X[0] * Y[0] + X[1] * Y[1];
    for (int k = 0; k < 2; ++k) {
      double s = 0;
      for (int b = 0; b < 2; ++b) s += X[k] * Y[b] * p[b] + X[b] * p[b] * Y[k];
      // - delta_{ab} x_k term contracts to -x_k (X.Y)
      out[k] = c * (s - xy * p[k]);
    }
  };
  M.has_retraction = false;
  return M;
}

TargetManifold analytic_chart(int dim,
                              std::vector<PowerSeries> metric_series,
                              std::vector<PowerSeries> gamma_series) {
  if ((int)metric_series.size() != dim * dim)
    throw std::invalid_argument("analytic_chart: metric needs dim^2 series");
  if ((int)gamma_series.size() != dim * dim * dim)
    throw std::invalid_argument("analytic_chart: christoffel needs dim^3 series");
  TargetManifold M;
  M.name = "analytic_chart(" + std::to_string(dim) + ")";
  M.dim = dim;
  auto ms = std::make_shared<std::vector<PowerSeries>>(std::move(metric_series));
  auto gs = std::make_shared<std::vector<PowerSeries>>(std::move(gamma_series));
  M.metric = [dim, ms](const double* p, double* h) {
    Vec x(p, p + dim);
    for (int i = 0; i < dim * dim; ++i) h[i] = (*ms)[i].eval(x);
  };
  M.gamma = [dim, gs](const double* p, const double* X, const double* Y, double* out) {
    Vec x(p, p + dim);
    for (int k = 0; k < dim; ++k) {
      double s = 0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          s += (*gs)[(k * dim + a) * dim + b].eval(x) * X[a] * Y[b];
      out[k] = s;
    }
  };
  M.has_retraction = false;
  return M;
}

} // namespace wavemaps
