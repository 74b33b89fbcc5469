#pragma once
#include <optional>
#include <stdexcept>
#include <vector>

#include "wavemaps/geometry.hpp"
#include "wavemaps/grid.hpp"

namespace wavemaps {

struct BlowupError : std::runtime_error {
  double u, v, t;
  BlowupError(double u_, double v_, double t_)
      : std::runtime_error("blowup guard tripped"), u(u_), v(v_), t(0.5 * (u_ - v_)) {
    v = v_;
    t = t_;
  }
};

struct SolveOptions {
  bool retract = true;          // project back onto the target after each cell
  double blowup_ceiling = 1e6;  // guard on sup of values and divided differences
  double pad = 0.0;             // extra domain margin beyond x-range + T
};

// Riemann-invariant form of the data along t=0:
//   phi_u = (f' + g)/2,  phi_v = (f' - g)/2
// f' by 4th-order central differences in the interior.
struct CharacteristicData {
  double x0 = 0, dx = 0.01;
  int dim = 1;
  std::vector<double> phi_u, phi_v; // (n, dim)
  int n() const { return dim ? (int)(phi_u.size() / dim) : 0; }
};
CharacteristicData cauchy_to_characteristic(const CauchyData& data);

// One lattice cell of the integrated equation
//   phi(u+h,v+h) = phi(u+h,v) + phi(u,v+h) - phi(u,v) - h^2 Gamma(avg)(D_u phi, D_v phi)
// with cell-averaged base point and cell-centered divided differences;
// predictor seeded by the three known corners, one corrector pass.
void advance_cell(const TargetManifold& M, double h,
                  const double* p00, const double* p10, const double* p01,
                  double* p11, bool retract = true);

// Forcing located at cell centers (nu-1 x nv-1 cells of a NullGrid).
struct CellField {
  NullGrid grid;
  int dim = 1;
  std::vector<double> data;
  CellField() = default;
  CellField(const NullGrid& g, int d)
      : grid(g), dim(d), data((size_t)(g.nu - 1) * (g.nv - 1) * d, 0.0) {}
  double* at(int i, int j) { return data.data() + ((size_t)i * (grid.nv - 1) + j) * dim; }
  const double* at(int i, int j) const {
    return data.data() + ((size_t)i * (grid.nv - 1) + j) * dim;
  }
};

struct SolveResult {
  GridField phi;
  int band = 0; // filled diagonals |i-j| <= band
};

// March the Cauchy problem on the characteristic lattice over the strip
// |t| <= T. Data is extended constant outside its table. The lattice is
// the square [x_min - T - pad, x_max + T + pad]^2 in (u,v); only the band
// of diagonals needed for |t| <= T is filled.
SolveResult solve(const CauchyData& data, const TargetManifold& target, double T, double h,
                  const SolveOptions& opts = {});

// Free d'Alembert evolution phi = F(u) + G(v), trapezoid primitives of g.
// The lattice mixed difference of the output vanishes identically.
GridField dalembert_free(const CauchyData& data, const NullGrid& grid);

// Zero-data inverse of the lattice mixed difference: the returned field W
// satisfies (W(i+1,j+1)-W(i+1,j)-W(i,j+1)+W(i,j))/h^2 == F(cell i,j)
// exactly, W = 0 on the t=0 diagonal, symmetric O(h^2)-consistent seeding
// on the first diagonals (discrete zero Cauchy data).
GridField inverse_box(const CellField& forcing);

struct PicardResult {
  GridField phi;
  std::vector<double> x_ratios;    // ||incr_{k+1}||_X / ||incr_k||_X
  std::vector<double> sup_ratios;
  std::vector<double> x_increments;
  bool converged = false;
  bool diverged = false;
  int iterations = 0;
};

struct PicardOptions {
  int max_iterations = 40;
  double tol = 1e-10;          // stop when X-norm increment drops below
  double divergence_ratio = 10.0; // two consecutive ratios above this flags divergence
  double blowup_ceiling = 1e6;
};

// Iterate phi^{k+1} = S(f,g) + Box^{-1}[-Gamma(phi^k)(phi^k_u, phi^k_v)]
// on the lattice; tracks contraction ratios in the discrete X norm and in
// sup norm. Same lattice geometry as solve().
PicardResult picard_iterate(const CauchyData& data, const TargetManifold& target,
                            double T, double h, const PicardOptions& opts = {});

// Lattice X norm ||phi_uv||_{L^1 du dv} + l11(trace at t=0); the trace part
// is computed from the diagonals d = 0, +-1.
double grid_x_seminorm(const GridField& phi); // L^1 of cell mixed differences only

} // namespace wavemaps
