#pragma once
#include <functional>
#include <vector>

#include "wavemaps/geometry.hpp"
#include "wavemaps/grid.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

// ||f||_{H^s} = (sum <xi>^{2s} |c|^2)^{1/2}; homogeneous variant drops the
// zero mode and weights |xi|^{2s}. Flags data with nonzero mean through the
// returned struct when homogeneous.
double sobolev_norm(const SpectralField1D& f, double s, bool homogeneous = false);
bool homogeneous_mean_flag(const SpectralField1D& f, double tol = 1e-10);

// wave-Sobolev norm on an (x,t) field:
// || <|tau|+|xi|>^s <|tau|-|xi|>^delta  fhat ||_{l^2}
double hsd_norm(const SpectralField2D& f_xt, double s, double delta);

// product norm on a (u,v) field: || <mu>^{s1} <nu>^{s2} fhat ||_{l^2}
double product_sobolev_norm(const SpectralField2D& f_uv, double s1, double s2);

// lattice mixed norms
double mixed_l2u_linfv(const SpectralField2D& f);
double mixed_l2v_linfu(const SpectralField2D& f);

// --- localized norms ------------------------------------------------------
// Overlapping unit windows with 50% overlap forming an exact smooth
// partition of unity on the period.
struct WindowSet {
  double period;
  int count;             // centers at period * m / count
  double spacing() const { return period / count; }
  double center(int m) const { return period * m / count; }
  // normalized window m evaluated at x (periodic)
  double weight(int m, double x) const;
  static WindowSet unit_windows(double period);
};

// ||f||_L = sup_I || D~^s (eta_I f) ||_{L^2}
double localized_L_norm(const SpectralField1D& f, double s);
// square-function version (sum_I ||eta_I f||_{H^s}^2)^{1/2} for the
// window-vs-global comparison lemma
double localized_square_sum(const SpectralField1D& f, double s);

// --- integral norms on lattice data ---------------------------------------
// L^{1,1} norm ||f'||_{L^1} + ||f||_{L^inf} + ||g||_{L^1}; derivative and
// velocity lengths in the target metric when M is given.
double l11_norm(const CauchyData& data, const TargetManifold* M = nullptr);

// X norm ||phi_uv||_{L^1 du dv} + l11(trace at t=0)
double x_norm(const GridField& phi, const TargetManifold* M = nullptr);

// --- rescaled data (concentration-compactness input) ----------------------
struct RellichReport {
  std::vector<double> lambdas;
  std::vector<double> norms;   // ||f~||_{H^delta} + ||g~||_{H^{delta-1}}
  std::vector<double> g_norms; // g-part alone (decays like lambda^{-1/2})
  double exponent = 0;         // LSQ slope of log norm vs log lambda
  double lsq_residual = 0;
};

// f~ = chi (f(x/lambda) - fbar), g~ = lambda^{-1} chi g(x/lambda),
// fbar = int f(x/lambda) psi dx; chi = 1 on [-1,1] supported in [-2,2],
// psi a unit-mass bump.
void rescale_and_localize(const std::function<double(double)>& f,
                          const std::function<double(double)>& g, double lambda,
                          double period, int n, SpectralField1D& f_out,
                          SpectralField1D& g_out);
RellichReport verify_rellich(const std::function<double(double)>& f,
                             const std::function<double(double)>& g, double delta,
                             const std::vector<double>& lambdas);

// --- global-norm tracking for rescaled lattice solutions ------------------
struct BsGlobalNorms {
  double u_norm = 0;   // || D~_u^{s-1} phi_u ||_{L^2_u L^inf_v}
  double v_norm = 0;   // symmetric in v
  double uv_norm = 0;  // || phi_uv ||_{H^{s-1}_u H^{s-1}_v} on the given patch
};
// Rescaling phi^lambda(u,v) = phi(u/lambda, v/lambda) reuses the lattice
// values with spacing lambda h. The (i,j) rectangle bounds the patch used
// for the 2D norm (phi_uv is negligible outside the interaction diamond).
BsGlobalNorms track_rescaled_solution_norms(const GridField& phi, int band, double lambda,
                                            double s, int i_lo, int i_hi, int j_lo,
                                            int j_hi);

// least-squares slope of log(y) against log(x); residual is RMS in log space
void loglog_fit(const std::vector<double>& x, const std::vector<double>& y,
                double& slope, double& resid);

} // namespace wavemaps
