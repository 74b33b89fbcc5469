#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "wavemaps/norms.hpp"
#include "wavemaps/spectral.hpp"

namespace wavemaps {

// Low-rank separable representation of a doubly periodic field
//   phi(u,v) = sum_q fu[q](u) * fv[q](v)
// sampled on n points per axis. Products, windows, and one-axis Fourier
// multipliers act factorwise, so ranks stay small while product Sobolev
// and localized norms are evaluated exactly through factor Gram matrices.
struct SeparableField {
  double period = 2 * 3.141592653589793238462643383279502884;
  int n = 0;
  std::vector<std::vector<cd>> fu, fv; // factor samples, one vector per rank

  int rank() const { return (int)fu.size(); }
  static SeparableField zero(double period, int n) { return SeparableField{period, n, {}, {}}; }
  void add_rank(std::vector<cd> a, std::vector<cd> b);

  SeparableField product(const SeparableField& o) const; // rank R1*R2
  void append(const SeparableField& o, cd scale = 1.0);  // += scale * o
  SeparableField scaled(cd c) const;
  SeparableField d_du() const; // spectral derivative of the u factors
  SeparableField d_dv() const;
  // one-axis Fourier multiplier (tables in FFT index order, size n)
  SeparableField multiplier_u(const std::vector<double>& m) const;
  SeparableField multiplier_v(const std::vector<double>& m) const;
  // pointwise window eta(u_c) and/or eta(v_c) in centered coordinates
  SeparableField windowed(const std::function<double(double)>& eta_u,
                          const std::function<double(double)>& eta_v) const;

  cd value(int i, int j) const; // sample at (u_i, v_j)
  double centered(int j) const {
    double x = period * j / n;
    return x < period / 2 ? x : x - period;
  }
};

// || phi ||_{H^{s1}_u H^{s2}_v} via factor Gram matrices (exact in the
// coefficient-l^2 convention of SpectralField1D)
double separable_product_norm(const SeparableField& f, double s1, double s2);

// localized product norms of the L family built from the unit window
// partition (sup inside the square sum):
//   l_in_v: ( sum_I sup_J || eta_I(u) eta_J(v) phi ||_{H^{st}_u H^s_v}^2 )^{1/2}
//   else  : ( sum_J sup_I || eta_I(u) eta_J(v) phi ||_{H^s_u H^{st}_v}^2 )^{1/2}
double separable_hl_norm(const SeparableField& f, double s_tilde, double s, bool l_in_v);
// sup_I sup_J || Dt_u^s Dt_v^s (eta_I eta_J phi) ||_{L^2 L^2}
double separable_ll_norm(const SeparableField& f, double s);
// sup over lattice nodes (for L^inf comparisons)
double separable_sup(const SeparableField& f);

// Zero-Cauchy-data inverse d'Alembertian on the torus, cut off by a fixed
// bump eta(u)eta(v): solves psi_uv = F for the nonresonant part, subtracts
// the free wave matching the t=0 traces (including the secular c*t piece,
// which the cutoff renders periodic). Forcing factors must carry no zero
// mode on either axis; zero-mode mass is projected out.
SeparableField inverse_box_windowed(const SeparableField& forcing);

// --- estimate verification ---------------------------------------------------

struct EstimateParams {
  double s = 0.8;        // bootstrap exponent used by the L-space estimates
  double s_prime = 0.3;  // s' of the 1D multiplication estimate
  double s1 = 0.8, s2 = 0.8;
  double s1_prime = 0.3, s2_prime = 0.3;
};

struct EnsembleSpec {
  std::vector<int> cutoffs = {64, 128, 256, 512, 1024, 2048, 4096};
  int samples_per_cutoff = 143; // 7 cutoffs x 143 ~ 10^3 fields
  std::uint64_t seed = 2026;
  int workers = 0; // 0 = hardware concurrency (capped at 8)
};

struct EstimateReport {
  std::string estimate_id;
  std::string ensemble; // descriptor: size, cutoffs, smoothness classes
  std::vector<int> cutoffs;
  int samples_per_cutoff = 0;
  std::vector<double> max_ratio;    // per cutoff
  std::vector<double> median_ratio; // per cutoff
  std::vector<double> p90_ratio;    // per cutoff
  double cutoff_scaling_slope = 0;  // LSQ slope of log max_ratio vs log N
  double slope_residual = 0;
  bool verified = false; // slope <= 0.05
};

// estimate_id in {easy-mult, product-h1-a, product-h1-b, integ, exotic,
// l-conv, compact-est, h-wh, hh-wwhh, hh-hwhw}; throws std::invalid_argument
// otherwise. Each sample draws band-limited random fields at the cutoff plus
// adversarial near-extremizers (concentrated modes, opposite-mode pairs,
// modulated bumps) and reports LHS/RHS ratios.
EstimateReport verify_estimate(const std::string& estimate_id, const EstimateParams& params,
                               const EnsembleSpec& spec);

} // namespace wavemaps
