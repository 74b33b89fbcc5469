#pragma once
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wavemaps/grid.hpp"
#include "wavemaps/solver.hpp"

namespace wavemaps {

// Scalar profile G with its derivative g = G'; the primitive is either
// closed-form or filled in by adaptive quadrature at construction.
struct ScalarProfile {
  std::string name;
  std::function<double(double)> G;  // primitive
  std::function<double(double)> g;  // density

  static ScalarProfile gaussian();                 // G = exp(-x^2)
  static ScalarProfile gaussian_primitive();       // g = exp(-x^2), G its primitive (erf form)
  static ScalarProfile log_oscillation();          // G = sin(log <x>)
  static ScalarProfile bump(double amp = 1.0, double center = 0.0, double width = 1.0);
  // primitive of an arbitrary density via adaptive Simpson from 0
  static ScalarProfile from_density(std::string name, std::function<double(double)> g);
};

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12);

// Closed-form S^1 wave map phi(x,t) = exp(i G(x+t)/2) exp(-i G(x-t)/2)
// with Cauchy data f == 1, g_vel = i G'(x). Embedded in R^2.
struct S1Exact {
  ScalarProfile prof;
  void value(double u, double v, double* out2) const; // (Re, Im)
  CauchyData data(double x0, double dx, int n) const; // dim 2 extrinsic data
  GridField on_grid(const NullGrid& grid) const;
};
S1Exact s1_exact(const ScalarProfile& prof);

// Geodesic wave maps: compose a free scalar field with the unit-speed
// circle geodesic, phi = e^{i psi}.
GridField geodesic_wave_map(const GridField& psi_free);

// Riccati blow-up psi_u-type transport: closed form
//   psi(x,t) = psi0(x-t) / (1 - psi0(x-t) t),  T* = 1/max psi0.
// integrate() runs the first-order upwind transport d psi/dt = psi^2 along
// x - t = const with a blow-up ceiling and reports the trip time.
struct RiccatiOracle {
  std::function<double(double)> psi0;
  double value(double x, double t) const;
  double blowup_time(double psi0_max) const { return 1.0 / psi0_max; }
  // returns the time at which the ceiling is first exceeded (or -1)
  double integrate_until_ceiling(double x0, double dt, double ceiling = 1e6,
                                 double t_max = 2.0) const;
  // scalar lattice field on a grid (throws std::domain_error at/after blow-up)
  GridField on_grid(const NullGrid& grid) const;
};
RiccatiOracle riccati_blowup(std::function<double(double)> psi0);

// Nirenberg substitution psi = 1 - e^phi linearizing phi_uv = -phi_u phi_v.
// Forward/backward transforms of scalar lattice fields; backward guards
// sup |psi| >= 1.
GridField nirenberg_forward(const GridField& phi);   // phi -> psi
GridField nirenberg_backward(const GridField& psi);  // psi -> phi = log(1-psi)
// residual sup |phi_uv + phi_u phi_v| over interior cells (scalar fields)
double nirenberg_residual(const GridField& phi);

// High-frequency quadratic interaction of the first Picard iterate:
//   Ghat(xi) = 1/log^{1/2+eps}<xi> (log argument clamped below |xi|=1),
//   band-limited at N,
//   g = sin(sqrt(-Lap)) G,  Q = (sin(sqrt(-Lap))/sqrt(-Lap) g)^2.
// Tracks ||Q||_{H^{1/2}} and ||G||_{H^{-1/2}} across a cutoff sweep; the
// `controlled` variant replaces the exponent by 1+eps, which saturates.
struct CounterexampleSweep {
  std::vector<int> cutoffs;
  std::vector<double> q_h_half;     // ||Q||_{H^{1/2}}
  std::vector<double> g_h_neghalf;  // ||G||_{H^{-1/2}}
};
CounterexampleSweep critical_counterexample(double eps, const std::vector<int>& cutoffs,
                                            bool controlled = false);

// Non-scattering data G = sin(log <x>): Ḣ^1 distance at time T between the
// S^1 solution and the best free match from the two-parameter family
// e^{iG(u)/2} e^{-i a/2} + e^{i b/2} e^{-iG(v)/2} - e^{i b/2} e^{-i a/2};
// each phase enters through a single complex integral, so the infimum is
// taken in closed form.
struct ScatterDefectSweep {
  std::vector<double> times;
  std::vector<double> defect; // per-time infimum over the free family
};
ScatterDefectSweep nonscattering_defect(const ScalarProfile& prof,
                                        const std::vector<double>& times,
                                        double u_max = 2e4, double ds = 2e-3);

} // namespace wavemaps
