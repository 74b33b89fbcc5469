#include "wavemaps/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "wavemaps/norms.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  struct Rec {
    static double go(const std::function<double(double)>& f, double a, double b, double fa,
                     double fm, double fb, double whole, double tol, int depth) {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
      if (depth > 50 || std::abs(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15.0;
      return go(f, a, m, fa, flm, fm, left, tol / 2, depth + 1) +
             go(f, m, b, fm, frm, fb, right, tol / 2, depth + 1);
    }
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
  return Rec::go(f, a, b, fa, fm, fb, whole, tol, 0);
}

ScalarProfile ScalarProfile::gaussian() {
  ScalarProfile p;
  p.name = "gaussian";
  p.G = [](double x) { return std::exp(-x * x); };
  p.g = [](double x) { return -2.0 * x * std::exp(-x * x); };
  return p;
}

ScalarProfile ScalarProfile::gaussian_primitive() {
  ScalarProfile p;
  p.name = "gaussian_primitive";
  const double rpi = std::sqrt(3.141592653589793238462643383279502884);
  p.G = [rpi](double x) { return 0.5 * rpi * std::erf(x); };
  p.g = [](double x) { return std::exp(-x * x); };
  return p;
}

ScalarProfile ScalarProfile::log_oscillation() {
  ScalarProfile p;
  p.name = "log_oscillation";
  p.G = [](double x) { return std::sin(std::log(bracket(x))); };
  p.g = [](double x) {
    double br = bracket(x);
    return std::cos(std::log(br)) * x / (br * br);
  };
  return p;
}

ScalarProfile ScalarProfile::bump(double amp, double center, double width) {
  ScalarProfile p;
  p.name = "bump";
  p.G = [=](double x) { return amp * wavemaps::bump((x - center) / width); };
  p.g = [=](double x) {
    double y = (x - center) / width;
    double q = 1.0 - y * y;
    if (q <= 0) return 0.0;
    // d/dx of amp e^{1 - 1/(1-y^2)}
    return amp * std::exp(1.0 - 1.0 / q) * (-2.0 * y / (q * q)) / width;
  };
  return p;
}

ScalarProfile ScalarProfile::from_density(std::string name, std::function<double(double)> g) {
  ScalarProfile p;
  p.name = std::move(name);
  p.g = g;
  p.G = [g](double x) {
    if (x == 0) return 0.0;
    return adaptive_simpson(g, 0.0, x, 1e-12);
  };
  return p;
}

// --- closed-form S^1 wave map -------------------------------------------------

void S1Exact::value(double u, double v, double* out) const {
  double phase = 0.5 * (prof.G(u) - prof.G(v));
  out[0] = std::cos(phase);
  out[1] = std::sin(phase);
}

CauchyData S1Exact::data(double x0, double dx, int n) const {
  const ScalarProfile& p = prof;
  return CauchyData::sample(
      2, x0, dx, n,
      [](double, double* f) {
        f[0] = 1.0;
        f[1] = 0.0;
      },
      [&p](double x, double* g) {
        // phi_t(x,0) = i G'(x) phi = i G'(x)
        g[0] = 0.0;
        g[1] = p.g(x);
      });
}

GridField S1Exact::on_grid(const NullGrid& grid) const {
  GridField F(grid, 2);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j) value(grid.u(i), grid.v(j), F.at(i, j));
  return F;
}

S1Exact s1_exact(const ScalarProfile& prof) { return S1Exact{prof}; }

GridField geodesic_wave_map(const GridField& psi) {
  if (psi.dim != 1) throw std::invalid_argument("geodesic_wave_map: scalar input expected");
  GridField out(psi.grid, 2);
  for (int i = 0; i < psi.grid.nu; ++i)
    for (int j = 0; j < psi.grid.nv; ++j) {
      double a = psi.at(i, j)[0];
      out.at(i, j)[0] = std::cos(a);
      out.at(i, j)[1] = std::sin(a);
    }
  return out;
}

// --- Riccati blow-up -----------------------------------------------------------

double RiccatiOracle::value(double x, double t) const {
  double w = psi0(x - t);
  double den = 1.0 - w * t;
  if (den <= 0) throw std::domain_error("riccati: at/after blow-up");
  return w / den;
}

double RiccatiOracle::integrate_until_ceiling(double x0, double dt, double ceiling,
                                              double t_max) const {
  // transport along the characteristic x = x0 + t: d psi/dt = psi^2
  double psi = psi0(x0), t = 0;
  while (t < t_max) {
    psi += dt * psi * psi;
    t += dt;
    if (std::abs(psi) > ceiling || !std::isfinite(psi)) return t;
  }
  return -1.0;
}

GridField RiccatiOracle::on_grid(const NullGrid& grid) const {
  GridField F(grid, 1);
  for (int i = 0; i < grid.nu; ++i)
    for (int j = 0; j < grid.nv; ++j)
      F.at(i, j)[0] = value(grid.x(i, j), grid.t(i, j));
  return F;
}

RiccatiOracle riccati_blowup(std::function<double(double)> psi0) {
  return RiccatiOracle{std::move(psi0)};
}

// --- Nirenberg substitution ----------------------------------------------------

GridField nirenberg_forward(const GridField& phi) {
  if (phi.dim != 1) throw std::invalid_argument("nirenberg: scalar fields only");
  GridField out(phi.grid, 1);
  for (size_t k = 0; k < phi.data.size(); ++k) out.data[k] = 1.0 - std::exp(phi.data[k]);
  return out;
}

GridField nirenberg_backward(const GridField& psi) {
  if (psi.dim != 1) throw std::invalid_argument("nirenberg: scalar fields only");
  for (double v : psi.data)
    if (std::abs(v) >= 1.0)
      throw std::domain_error("nirenberg_backward: sup |psi| >= 1, log(1-psi) leaves the chart");
  GridField out(psi.grid, 1);
  for (size_t k = 0; k < psi.data.size(); ++k) out.data[k] = std::log(1.0 - psi.data[k]);
  return out;
}

double nirenberg_residual(const GridField& phi) {
  const NullGrid& g = phi.grid;
  double h = g.h, res = 0;
  for (int i = 1; i < g.nu - 1; ++i)
    for (int j = 1; j < g.nv - 1; ++j) {
      double uv, du, dv;
      phi.duv_at(i, j, &uv);
      phi.du_at(i, j, &du);
      phi.dv_at(i, j, &dv);
      res = std::max(res, std::abs(uv + du * dv));
    }
  (void)h;
  return res;
}

// --- high-frequency counterexample ----------------------------------------------

CounterexampleSweep critical_counterexample(double eps, const std::vector<int>& cutoffs,
                                            bool controlled) {
  CounterexampleSweep sw;
  sw.cutoffs = cutoffs;
  double expo = controlled ? (1.0 + eps) : (0.5 + eps);
  for (int N : cutoffs) {
    int n = 4 * N; // products reach frequency 2N; 4N bins keep them alias-free
    // period 2 pi, integer frequencies
    std::vector<cd> G(n, 0.0), gg(n, 0.0), w(n, 0.0);
    auto Ghat = [&](int k) {
      double ak = std::abs((double)k);
      // log<xi> vanishes at xi = 0, but that mode carries sin(0) = 0 anyway;
      // clamp the log argument at |xi| = 1 only to avoid dividing by zero there
      double l = std::log(bracket(std::max(ak, 1.0)));
      return 1.0 / std::pow(l, expo);
    };
    double qg = 0;
    for (int k = -N; k <= N; ++k) {
      int idx = (k % n + n) % n;
      double c = Ghat(k);
      G[idx] = c;
      double ak = std::abs((double)k);
      double snc = ak > 0 ? std::sin(ak) / ak : 1.0;
      gg[idx] = std::sin(ak) * c;
      w[idx] = snc * gg[idx].real(); // (sin sqrt(-Lap)/sqrt(-Lap)) g
      qg += c * c / bracket((double)k);
    }
    sw.g_h_neghalf.push_back(std::sqrt(qg));
    // Q = w^2 in position space
    dft(w, +1);
    for (auto& z : w) z *= z;
    dft(w, -1);
    double invn = 1.0 / n;
    double qq = 0;
    for (int k = 0; k < n; ++k) {
      int kk = k <= n / 2 - 1 ? k : k - n;
      double c2 = std::norm(w[k] * invn);
      qq += bracket((double)kk) * c2;
    }
    sw.q_h_half.push_back(std::sqrt(qq));
  }
  return sw;
}

// --- non-scattering witness ------------------------------------------------------

ScatterDefectSweep nonscattering_defect(const ScalarProfile& prof,
                                        const std::vector<double>& times, double u_max,
                                        double ds) {
  // phi_u(x,t) = i g(u)/2 phi, psi_u = i g(u)/2 e^{iG(u)/2} e^{-ia/2}:
  //   |phi_u - psi_u|^2 = g(u)^2/4 |e^{-iG(u-2T)/2} - e^{-ia/2}|^2
  // and the infimum over a is 2A - 2|I(T)| with
  //   A = int g^2/4,  I(T) = int g(u)^2/4 e^{-iG(u-2T)/2} du.
  // Symmetric expression in v with the b phase. Hdot^1 in (x,t) derivatives
  // doubles both parts. Quadrature is logarithmic in |u| to track the
  // slowly decaying tails of g.
  ScatterDefectSweep sw;
  sw.times = times;

  // quadrature nodes: uniform on [-1,1], logarithmic outside up to u_max
  std::vector<double> nodes, weights;
  for (double x = -1.0; x <= 1.0 + 1e-12; x += 1e-3) {
    nodes.push_back(x);
    weights.push_back(1e-3);
  }
  for (double s = 0; s <= std::log(u_max); s += ds) {
    double x = std::exp(s);
    nodes.push_back(x);
    weights.push_back(x * ds);
    nodes.push_back(-x);
    weights.push_back(x * ds);
  }

  for (double T : times) {
    double A_u = 0, A_v = 0;
    cd I_u = 0, I_v = 0;
    for (size_t k = 0; k < nodes.size(); ++k) {
      double u = nodes[k], wq = weights[k];
      double gu = prof.g(u);
      double q = 0.25 * gu * gu * wq;
      A_u += q;
      double Gv = prof.G(u - 2 * T);
      I_u += q * cd(std::cos(0.5 * Gv), -std::sin(0.5 * Gv));
      // v-part: at time T, v = x - T ranges over the same nodes
      double v = nodes[k];
      double gv = prof.g(v);
      double q2 = 0.25 * gv * gv * wq;
      A_v += q2;
      double Gu = prof.G(v + 2 * T);
      I_v += q2 * cd(std::cos(0.5 * Gu), std::sin(0.5 * Gu));
    }
    double d2 = 2.0 * ((2 * A_u - 2 * std::abs(I_u)) + (2 * A_v - 2 * std::abs(I_v)));
    sw.defect.push_back(std::sqrt(std::max(0.0, d2)));
  }
  return sw;
}

} // namespace wavemaps
