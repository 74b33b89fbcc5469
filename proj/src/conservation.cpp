#include "wavemaps/conservation.hpp"

#include <algorithm>
#include <cmath>

namespace wavemaps {

namespace {
inline double hdot(const double* h, int d, const double* X, const double* Y) {
  double s = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) s += h[a * d + b] * X[a] * Y[b];
  return s;
}
} // namespace

EnergyMomentum energy_momentum(const GridField& phi, const TargetManifold& M, int band) {
  const NullGrid& g = phi.grid;
  int dim = phi.dim;
  EnergyMomentum out;
  std::vector<double> du(dim), dv(dim), hm(dim * dim);
  double max_tuv = 0;
  for (int d = -(band - 1); d <= band - 1; ++d) {
    int lo = phi.diag_lo(d), hi = phi.diag_hi(d);
    if (hi - lo < 2) continue;
    double E = 0, P = 0;
    for (int i = lo; i <= hi; ++i) {
      int j = i - d;
      phi.du_at(i, j, du.data());
      phi.dv_at(i, j, dv.data());
      M.metric(phi.at(i, j), hm.data());
      double tuu = 0.5 * hdot(hm.data(), dim, du.data(), du.data());
      double tvv = 0.5 * hdot(hm.data(), dim, dv.data(), dv.data());
      double w = (i == lo || i == hi) ? 0.5 : 1.0; // trapezoid in x, spacing h
      E += w * g.h * (tuu + tvv);
      P += w * g.h * (tuu - tvv);
      // trace part, evaluated through the (x,t) components so cancellation
      // is a floating-point statement rather than a syntactic one
      std::vector<double> px(dim), pt(dim);
      for (int c = 0; c < dim; ++c) {
        px[c] = du[c] + dv[c];
        pt[c] = du[c] - dv[c];
      }
      double xx = hdot(hm.data(), dim, px.data(), px.data());
      double tt = hdot(hm.data(), dim, pt.data(), pt.data());
      double txx = 0.25 * (xx + tt);
      double ttt = 0.25 * (tt + xx);
      max_tuv = std::max(max_tuv, 0.25 * std::abs(txx - ttt));
    }
    out.diags.push_back(d);
    out.times.push_back(d * g.h * 0.5);
    out.energy.push_back(E);
    out.momentum.push_back(P);
  }
  out.traceless_residual = max_tuv;
  return out;
}

PohlmeyerReport pohlmeyer_check(const GridField& phi, const TargetManifold& M, int band) {
  const NullGrid& g = phi.grid;
  int dim = phi.dim, N = g.nu - 1;
  PohlmeyerReport rep;
  std::vector<double> du(dim), dv(dim);
  // |phi_u|_h along each u-column (varying v within the band)
  for (int i = 1; i < N; ++i) {
    double mn = 1e300, mx = -1e300;
    int cnt = 0;
    for (int j = std::max(1, i - (band - 1)); j <= std::min(N - 1, i + (band - 1)); ++j) {
      phi.du_at(i, j, du.data());
      double val = metric_length(M, phi.at(i, j), du.data());
      mn = std::min(mn, val);
      mx = std::max(mx, val);
      ++cnt;
    }
    if (cnt >= 2) rep.max_u_variation = std::max(rep.max_u_variation, mx - mn);
  }
  for (int j = 1; j < N; ++j) {
    double mn = 1e300, mx = -1e300;
    int cnt = 0;
    for (int i = std::max(1, j - (band - 1)); i <= std::min(N - 1, j + (band - 1)); ++i) {
      phi.dv_at(i, j, dv.data());
      double val = metric_length(M, phi.at(i, j), dv.data());
      mn = std::min(mn, val);
      mx = std::max(mx, val);
      ++cnt;
    }
    if (cnt >= 2) rep.max_v_variation = std::max(rep.max_v_variation, mx - mn);
  }
  return rep;
}

HardwireReport hardwire_check(const GridField& phi, int band) {
  const NullGrid& g = phi.grid;
  int m = phi.dim, N = g.nu - 1;
  HardwireReport rep;
  std::vector<double> du(m), dv(m), duv(m), R(m * m), Ru(m);
  for (int i = 1; i < N; ++i) {
    int jlo = std::max(1, i - (band - 2)), jhi = std::min(N - 1, i + (band - 2));
    for (int j = jlo; j <= jhi; ++j) {
      const double* p = phi.at(i, j);
      phi.du_at(i, j, du.data());
      phi.dv_at(i, j, dv.data());
      phi.duv_at(i, j, duv.data());
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) R[a * m + b] = dv[a] * p[b] - p[a] * dv[b];
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
          rep.max_antisymmetry =
              std::max(rep.max_antisymmetry, std::abs(R[a * m + b] + R[b * m + a]));
      double dvq = 0;
      for (int a = 0; a < m; ++a) {
        double s = 0;
        for (int b = 0; b < m; ++b) s += R[a * m + b] * du[b];
        Ru[a] = s;
        rep.max_residual = std::max(rep.max_residual, std::abs(duv[a] - s));
        dvq += 2.0 * du[a] * s; // d_v |phi_u|^2 through the hardwired form
      }
      rep.max_pohlmeyer_deriv = std::max(rep.max_pohlmeyer_deriv, std::abs(dvq));
    }
  }
  return rep;
}

FluxNorms derivative_flux_norms(const GridField& phi, const TargetManifold& M, int band) {
  const NullGrid& g = phi.grid;
  int dim = phi.dim, N = g.nu - 1;
  FluxNorms fn;
  std::vector<double> du(dim), dv(dim);
  double su = 0, sv = 0;
  for (int i = 1; i < N; ++i) {
    double mx = 0;
    for (int j = std::max(1, i - (band - 1)); j <= std::min(N - 1, i + (band - 1)); ++j) {
      phi.du_at(i, j, du.data());
      mx = std::max(mx, metric_length(M, phi.at(i, j), du.data()));
    }
    su += mx * mx * g.h;
  }
  for (int j = 1; j < N; ++j) {
    double mx = 0;
    for (int i = std::max(1, j - (band - 1)); i <= std::min(N - 1, j + (band - 1)); ++i) {
      phi.dv_at(i, j, dv.data());
      mx = std::max(mx, metric_length(M, phi.at(i, j), dv.data()));
    }
    sv += mx * mx * g.h;
  }
  fn.u_l2_linf = std::sqrt(su);
  fn.v_l2_linf = std::sqrt(sv);
  return fn;
}

} // namespace wavemaps
