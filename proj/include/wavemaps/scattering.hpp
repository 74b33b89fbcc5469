#pragma once
#include <vector>

#include "wavemaps/geometry.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

// --- conformal compactification --------------------------------------------
// Phi(U,V) = phi(tan U, tan V) on the Einstein diamond |U|, |V| < pi/2.
// Pullbacks interpolate bicubically on the source lattice; queries outside
// the source domain clamp to the nearest node (the constant extension used
// for compactified data).

// pull a field back to a (U,V) lattice with n nodes per axis spanning
// (-pi/2 + H, pi/2 - H), H = pi/n
GridField compactify(const GridField& phi, int n);
// inverse pullback phi(u,v) = Phi(arctan u, arctan v) onto a target lattice
GridField decompactify(const GridField& Phi, const NullGrid& target);

// data pullback: f~(X) = f(tan X) (constant beyond the diamond),
// g~(X) = sec^2(X) g(tan X) (zero beyond); the X grid spans
// [-pi/2 - pad, pi/2 + pad] with spacing dx
CauchyData compactify_data(const CauchyData& data, double dx, double pad);

// bicubic interpolation of a lattice field at (u, v), clamped at edges
void field_interp(const GridField& phi, double u, double v, double* out);

// --- asymptotic states for compactly supported data -------------------------

// Residuals of the constancy asserted beyond the interaction region of data
// supported in [-T, T]: phi_u must vanish on |u| > T, phi_v on |v| > T, and
// phi must be constant on the four outer quadrants.
struct FreeResolutionReport {
  double strip_u_residual = 0;     // sup |phi_u| over |u| > T (band interior)
  double strip_v_residual = 0;     // sup |phi_v| over |v| > T
  double quadrant_variation[4] = {0, 0, 0, 0}; // (+,+), (+,-), (-,+), (-,-)
};
FreeResolutionReport free_resolution_check(const GridField& phi, int band, double T);

// The outgoing state as its two characteristic profiles: F(u) read along the
// post-interaction row v = v*, G(v) along the column u = u*, and the corner
// constant; the assembled free solution is F(u) + G(v) - corner. future=true
// reads the t -> +inf state (u* > T, v* < -T), future=false the past state.
struct ScatteringState {
  int dim = 0;
  double h = 0, u0 = 0, v0 = 0;
  int i_star = 0, j_star = 0;            // lattice indices of the read lines
  std::vector<double> F, G;              // profiles, dim-interleaved per node
  std::vector<double> corner;            // chart point
  void free_value(int i, int j, double* out) const;
};
ScatteringState scattering_state(const GridField& phi, int band, double T, bool future);

// l11 and Hdot^1 size of phi(t) - state at each requested time
struct DefectTable {
  std::vector<double> times;
  std::vector<double> l11;
  std::vector<double> h1;
};
DefectTable scattering_defect(const GridField& phi, int band, const ScatteringState& st,
                              const std::vector<double>& times,
                              const TargetManifold* M = nullptr);

// interaction integral  II |phi_u|_h |phi_v|_h du dv over the band
double interaction_integral(const GridField& phi, int band, const TargetManifold* M = nullptr);

// --- L^{1,1} concentration profiling ----------------------------------------
struct ConcentrationReport {
  std::vector<double> deltas;
  std::vector<double> worst_mass;    // sup_{x0} int_{|x-x0|<=delta} (|f'| + |g|)
  std::vector<double> worst_center;  // arg sup
  double localization_radius = 0;    // largest admissible delta (mass < eps)
  double worst_window_l11 = 0;       // ||chi((x-x0)/delta)(f,g)||_{L^{1,1}} there
};
ConcentrationReport concentration_profile(const CauchyData& data,
                                          const std::vector<double>& deltas, double eps);

} // namespace wavemaps
