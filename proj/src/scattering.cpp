#include "wavemaps/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wavemaps/norms.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

double euclid(const double* x, int dim) {
  double s = 0;
  for (int c = 0; c < dim; ++c) s += x[c] * x[c];
  return std::sqrt(s);
}

// cubic Lagrange weights for interpolation at real index t over nodes
// i0 .. i0+3
void lagrange4(double t, int i0, double* w) {
  for (int k = 0; k < 4; ++k) {
    double num = 1, den = 1;
    for (int m = 0; m < 4; ++m) {
      if (m == k) continue;
      num *= t - (i0 + m);
      den *= (double)(k - m);
    }
    w[k] = num / den;
  }
}
} // namespace

void field_interp(const GridField& phi, double u, double v, double* out) {
  const NullGrid& g = phi.grid;
  double iu = (u - g.u0) / g.h, jv = (v - g.v0) / g.h;
  iu = std::clamp(iu, 0.0, (double)(g.nu - 1));
  jv = std::clamp(jv, 0.0, (double)(g.nv - 1));
  int i0 = std::clamp((int)std::floor(iu) - 1, 0, std::max(0, g.nu - 4));
  int j0 = std::clamp((int)std::floor(jv) - 1, 0, std::max(0, g.nv - 4));
  double wi[4], wj[4];
  lagrange4(iu, i0, wi);
  lagrange4(jv, j0, wj);
  for (int c = 0; c < phi.dim; ++c) out[c] = 0;
  for (int a = 0; a < 4 && i0 + a < g.nu; ++a)
    for (int b = 0; b < 4 && j0 + b < g.nv; ++b) {
      const double* p = phi.at(i0 + a, j0 + b);
      double w = wi[a] * wj[b];
      for (int c = 0; c < phi.dim; ++c) out[c] += w * p[c];
    }
}

GridField compactify(const GridField& phi, int n) {
  if (n < 4) throw std::invalid_argument("compactify: need n >= 4");
  double H = kPi / n;
  NullGrid g;
  g.u0 = g.v0 = -kPi / 2 + H;
  g.h = (kPi - 2 * H) / (n - 1);
  g.nu = g.nv = n;
  GridField Phi(g, phi.dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      field_interp(phi, std::tan(g.u(i)), std::tan(g.v(j)), Phi.at(i, j));
  return Phi;
}

GridField decompactify(const GridField& Phi, const NullGrid& target) {
  GridField phi(target, Phi.dim);
  for (int i = 0; i < target.nu; ++i)
    for (int j = 0; j < target.nv; ++j)
      field_interp(Phi, std::atan(target.u(i)), std::atan(target.v(j)), phi.at(i, j));
  return phi;
}

CauchyData compactify_data(const CauchyData& data, double dx, double pad) {
  double X0 = -kPi / 2 - pad, X1 = kPi / 2 + pad;
  int n = (int)std::ceil((X1 - X0) / dx) + 1;
  const double edge = kPi / 2 - 1e-9;
  return CauchyData::sample(
      data.dim, X0, dx, n,
      [&](double X, double* out) {
        double Xc = std::clamp(X, -edge, edge);
        data.f_at(std::tan(Xc), out);
      },
      [&](double X, double* out) {
        if (std::abs(X) >= kPi / 2) {
          for (int c = 0; c < data.dim; ++c) out[c] = 0;
          return;
        }
        double sec = 1.0 / std::cos(X);
        data.g_at(std::tan(X), out);
        for (int c = 0; c < data.dim; ++c) out[c] *= sec * sec;
      });
}

FreeResolutionReport free_resolution_check(const GridField& phi, int band, double T) {
  const NullGrid& g = phi.grid;
  FreeResolutionReport rep;
  std::vector<double> d(phi.dim);
  // quadrant references: first node seen in each quadrant
  std::vector<double> ref[4];
  for (int i = 1; i < g.nu - 1; ++i)
    for (int j = std::max(1, i - band + 1); j < std::min(g.nv - 1, i + band); ++j) {
      double uu = g.u(i), vv = g.v(j);
      if (std::abs(uu) > T + g.h) {
        phi.du_at(i, j, d.data());
        rep.strip_u_residual = std::max(rep.strip_u_residual, euclid(d.data(), phi.dim));
      }
      if (std::abs(vv) > T + g.h) {
        phi.dv_at(i, j, d.data());
        rep.strip_v_residual = std::max(rep.strip_v_residual, euclid(d.data(), phi.dim));
      }
      int q = -1;
      if (uu > T + g.h && vv > T + g.h) q = 0;
      else if (uu > T + g.h && vv < -T - g.h) q = 1;
      else if (uu < -T - g.h && vv > T + g.h) q = 2;
      else if (uu < -T - g.h && vv < -T - g.h) q = 3;
      if (q >= 0) {
        const double* p = phi.at(i, j);
        if (ref[q].empty()) ref[q].assign(p, p + phi.dim);
        double dev = 0;
        for (int c = 0; c < phi.dim; ++c) dev += (p[c] - ref[q][c]) * (p[c] - ref[q][c]);
        rep.quadrant_variation[q] = std::max(rep.quadrant_variation[q], std::sqrt(dev));
      }
    }
  return rep;
}

void ScatteringState::free_value(int i, int j, double* out) const {
  int nF = (int)(F.size() / dim), nG = (int)(G.size() / dim);
  int ii = std::clamp(i, 0, nF - 1), jj = std::clamp(j, 0, nG - 1);
  for (int c = 0; c < dim; ++c) out[c] = F[(size_t)ii * dim + c] + G[(size_t)jj * dim + c] - corner[c];
}

ScatteringState scattering_state(const GridField& phi, int band, double T, bool future) {
  const NullGrid& g = phi.grid;
  ScatteringState st;
  st.dim = phi.dim;
  st.h = g.h;
  st.u0 = g.u0;
  st.v0 = g.v0;
  double margin = 2 * g.h;
  // post-interaction read lines: future state reads G(v) on the strip
  // u > T and F(u) on the strip v < -T; past state is mirrored
  double u_star = future ? T + margin : -T - margin;
  double v_star = future ? -T - margin : T + margin;
  st.i_star = std::clamp((int)std::lround((u_star - g.u0) / g.h), 0, g.nu - 1);
  st.j_star = std::clamp((int)std::lround((v_star - g.v0) / g.h), 0, g.nv - 1);

  // Read each profile along its line inside the computed band and extend it
  // by its end values: phi_u vanishes beyond the data support, so F(u) is
  // constant exactly where the band runs out (and likewise G(v)).
  st.F.resize((size_t)g.nu * phi.dim);
  for (int i = 0; i < g.nu; ++i) {
    int ic = std::clamp(i, st.j_star - band + 1, st.j_star + band - 1);
    ic = std::clamp(ic, 0, g.nu - 1);
    const double* p = phi.at(ic, st.j_star);
    for (int c = 0; c < phi.dim; ++c) st.F[(size_t)i * phi.dim + c] = p[c];
  }
  st.G.resize((size_t)g.nv * phi.dim);
  for (int j = 0; j < g.nv; ++j) {
    int jc = std::clamp(j, st.i_star - band + 1, st.i_star + band - 1);
    jc = std::clamp(jc, 0, g.nv - 1);
    const double* p = phi.at(st.i_star, jc);
    for (int c = 0; c < phi.dim; ++c) st.G[(size_t)j * phi.dim + c] = p[c];
  }
  const double* pc = phi.at(st.i_star, st.j_star);
  st.corner.assign(pc, pc + phi.dim);
  return st;
}

DefectTable scattering_defect(const GridField& phi, int band, const ScatteringState& st,
                              const std::vector<double>& times, const TargetManifold* M) {
  const NullGrid& g = phi.grid;
  const int dim = phi.dim;
  DefectTable tab;
  std::vector<double> fv(dim), fv2(dim), fv3(dim), fv4(dim);

  auto Dval = [&](int i, int j, double* out) {
    st.free_value(i, j, fv4.data());
    const double* p = phi.at(i, j);
    for (int c = 0; c < dim; ++c) out[c] = p[c] - fv4[c];
  };

  for (double T : times) {
    int d = (int)std::lround(2 * T / g.h);
    if (std::abs(d) > band - 2) continue; // outside the computed band
    int jlo = std::max(1, 1 - d), jhi = std::min(g.nv - 2, g.nu - 2 - d);
    if (jhi - jlo < 4) continue;
    int count = jhi - jlo + 1;
    CauchyData diff;
    diff.dim = dim;
    diff.x0 = g.x(jlo + d, jlo);
    diff.dx = g.h;
    diff.f.resize((size_t)count * dim);
    diff.g.resize((size_t)count * dim);
    double h1sq = 0;
    std::vector<double> a(dim), b(dim), c2(dim), e(dim);
    for (int j = jlo; j <= jhi; ++j) {
      int i = j + d, k = j - jlo;
      Dval(i, j, &diff.f[(size_t)k * dim]);
      // d/dt = d_u - d_v by centered differences of the difference field
      Dval(i + 1, j, a.data());
      Dval(i - 1, j, b.data());
      Dval(i, j + 1, c2.data());
      Dval(i, j - 1, e.data());
      double dx2 = 0, dt2 = 0;
      for (int c = 0; c < dim; ++c) {
        double Du = (a[c] - b[c]) / (2 * g.h), Dv = (c2[c] - e[c]) / (2 * g.h);
        diff.g[(size_t)k * dim + c] = Du - Dv;
        dx2 += (Du + Dv) * (Du + Dv);
        dt2 += (Du - Dv) * (Du - Dv);
      }
      h1sq += (dx2 + dt2) * g.h;
    }
    tab.times.push_back(T);
    tab.l11.push_back(l11_norm(diff, M));
    tab.h1.push_back(std::sqrt(h1sq));
  }
  return tab;
}

double interaction_integral(const GridField& phi, int band, const TargetManifold* M) {
  const NullGrid& g = phi.grid;
  std::vector<double> du(phi.dim), dv(phi.dim);
  double total = 0;
  for (int i = 1; i < g.nu - 1; ++i)
    for (int j = std::max(1, i - band + 2); j < std::min(g.nv - 1, i + band - 1); ++j) {
      phi.du_at(i, j, du.data());
      phi.dv_at(i, j, dv.data());
      double lu, lv;
      if (M) {
        Vec p(phi.at(i, j), phi.at(i, j) + phi.dim);
        lu = metric_length(*M, p.data(), du.data());
        lv = metric_length(*M, p.data(), dv.data());
      } else {
        lu = euclid(du.data(), phi.dim);
        lv = euclid(dv.data(), phi.dim);
      }
      total += lu * lv * g.h * g.h;
    }
  return total;
}

ConcentrationReport concentration_profile(const CauchyData& data,
                                          const std::vector<double>& deltas, double eps) {
  ConcentrationReport rep;
  rep.deltas = deltas;
  int n = data.n(), dim = data.dim;
  if (n < 3) throw std::invalid_argument("concentration_profile: too few samples");
  // node densities |f'| + |g|
  std::vector<double> dens(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double fp = 0, gv = 0;
    for (int c = 0; c < dim; ++c) {
      int km = std::max(0, k - 1), kp = std::min(n - 1, k + 1);
      double d = (data.f[(size_t)kp * dim + c] - data.f[(size_t)km * dim + c]) /
                 ((kp - km) * data.dx);
      fp += d * d;
      gv += data.g[(size_t)k * dim + c] * data.g[(size_t)k * dim + c];
    }
    dens[k] = std::sqrt(fp) + std::sqrt(gv);
  }
  // prefix sums for window mass (trapezoid-like node sum * dx)
  std::vector<double> pref(n + 1, 0.0);
  for (int k = 0; k < n; ++k) pref[k + 1] = pref[k] + dens[k] * data.dx;

  rep.localization_radius = 0;
  double best_center_for_radius = data.x0;
  double best_delta_for_radius = deltas.empty() ? 0 : deltas[0];
  for (double del : deltas) {
    int w = std::max(1, (int)std::floor(del / data.dx));
    double worst = 0, wc = data.x0;
    for (int k = 0; k < n; ++k) {
      int lo = std::max(0, k - w), hi = std::min(n - 1, k + w);
      double mass = pref[hi + 1] - pref[lo];
      if (mass > worst) {
        worst = mass;
        wc = data.x0 + k * data.dx;
      }
    }
    rep.worst_mass.push_back(worst);
    rep.worst_center.push_back(wc);
    if (worst < eps && del > rep.localization_radius) {
      rep.localization_radius = del;
      best_center_for_radius = wc;
      best_delta_for_radius = del;
    }
  }
  // windowed data at the worst center of the admissible radius
  if (rep.localization_radius > 0) {
    CauchyData wd = data;
    for (int k = 0; k < n; ++k) {
      double chi = cutoff12((data.x0 + k * data.dx - best_center_for_radius) /
                            best_delta_for_radius);
      for (int c = 0; c < dim; ++c) {
        wd.f[(size_t)k * dim + c] *= chi;
        wd.g[(size_t)k * dim + c] *= chi;
      }
    }
    rep.worst_window_l11 = l11_norm(wd, nullptr);
  }
  return rep;
}

} // namespace wavemaps
