#pragma once
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavemaps/geometry.hpp"

namespace wavemaps {

// Characteristic lattice: node (i,j) sits at u = u0 + i h, v = v0 + j h,
// i.e. t = (u-v)/2, x = (u+v)/2. The t=0 line is the diagonal i = j
// (u0 = v0 always), constant-t slices are the diagonals i - j = const
// with t = (i-j) h/2.
struct NullGrid {
  double u0 = 0, v0 = 0;
  double h = 0.01;
  int nu = 0, nv = 0; // node counts per axis

  double u(int i) const { return u0 + i * h; }
  double v(int j) const { return v0 + j * h; }
  double t(int i, int j) const { return 0.5 * (u(i) - v(j)); }
  double x(int i, int j) const { return 0.5 * (u(i) + v(j)); }
};

struct GridField {
  NullGrid grid;
  int dim = 1;
  std::vector<double> data; // row-major (i, j, component)

  GridField() = default;
  GridField(const NullGrid& g, int d) : grid(g), dim(d), data((size_t)g.nu * g.nv * d, 0.0) {}

  double* at(int i, int j) { return data.data() + ((size_t)i * grid.nv + j) * dim; }
  const double* at(int i, int j) const { return data.data() + ((size_t)i * grid.nv + j) * dim; }

  // centered first differences (one-sided 2nd order at the boundary)
  void du_at(int i, int j, double* out) const;
  void dv_at(int i, int j, double* out) const;
  // centered mixed difference (interior only)
  void duv_at(int i, int j, double* out) const;

  // diagonal index of the constant-t slice through node (i,j)
  int diag(int i, int j) const { return i - j; }
  // nodes on diagonal d: i from max(0,d) .. min(nu-1, nv-1+d)
  int diag_lo(int d) const { return d > 0 ? d : 0; }
  int diag_hi(int d) const { int m = grid.nv - 1 + d; return m < grid.nu - 1 ? m : grid.nu - 1; }

  // values along t = d*h/2, sampled in x (spacing h); out gets (count, dim)
  std::vector<double> time_slice(int d) const;

  uint64_t hash_region(int i_lo, int i_hi, int j_lo, int j_hi) const; // FNV-1a over raw bytes
};

// Cauchy data (f, g) sampled uniformly in x; f is extended by its boundary
// values outside the table, g by zero (so f' and g vanish off the support).
struct CauchyData {
  double x0 = 0;     // first sample location
  double dx = 0.01;  // sample spacing
  int dim = 1;
  std::vector<double> f; // (n, dim)
  std::vector<double> g; // (n, dim)

  int n() const { return dim ? (int)(f.size() / dim) : 0; }
  double x_min() const { return x0; }
  double x_max() const { return x0 + (n() - 1) * dx; }

  void f_at(double x, double* out) const; // cubic interpolation, constant extension
  void g_at(double x, double* out) const; // cubic interpolation, zero extension

  // sample analytic data onto a lattice
  static CauchyData sample(int dim, double x0, double dx, int n,
                           const std::function<void(double, double*)>& f,
                           const std::function<void(double, double*)>& g);

  // resample onto a new lattice (exact copy when the lattices coincide)
  CauchyData resampled(double nx0, double ndx, int nn) const;
};

} // namespace wavemaps
