#pragma once
#include <vector>

#include "wavemaps/geometry.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

// Energy-momentum components of a lattice field in null coordinates:
//   T_uu = 1/2 |phi_u|^2_h,  T_vv = 1/2 |phi_v|^2_h,
//   T_uv = 1/2 (<phi_u,phi_v>_h - 1/2 g_{uv} <d phi, d phi>)  (== 0 algebraically in 1+1)
// evaluated with centered differences on the filled band.
struct EnergyMomentum {
  std::vector<int> diags;        // diagonal indices d (t = d h/2)
  std::vector<double> times;
  std::vector<double> energy;    // integral of (T_uu + T_vv) dx over the slice
  std::vector<double> momentum;  // integral of (T_uu - T_vv) dx
  double traceless_residual = 0; // max |T_uv|
};
EnergyMomentum energy_momentum(const GridField& phi, const TargetManifold& M, int band);

struct PohlmeyerReport {
  double max_u_variation = 0; // max over u-columns of (max-min) of |phi_u|_h along v
  double max_v_variation = 0; // symmetric
};
// Lemma-level conservation: |phi_u|_h is constant in v (and |phi_v|_h in u)
// along the exact flow; on the lattice both variations are O(h^2).
PohlmeyerReport pohlmeyer_check(const GridField& phi, const TargetManifold& M, int band);

struct HardwireReport {
  double max_antisymmetry = 0;   // max |R + R^t| entrywise (0 in exact arithmetic)
  double max_residual = 0;       // sup |phi_uv - R phi_u|
  double max_pohlmeyer_deriv = 0; // sup |d_v |phi_u|^2| reconstructed via R
};
// Sphere-target identity phi_uv = R phi_u with R = phi_v phi^t - phi phi_v^t;
// antisymmetry of R forces d_v |phi_u|^2 = 0.
HardwireReport hardwire_check(const GridField& phi, int band);

struct FluxNorms {
  double u_l2_linf = 0; // ||phi_u||_{L^2_u L^inf_v}
  double v_l2_linf = 0; // ||phi_v||_{L^2_v L^inf_u}
};
FluxNorms derivative_flux_norms(const GridField& phi, const TargetManifold& M, int band);

} // namespace wavemaps
