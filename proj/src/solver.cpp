#include "wavemaps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace wavemaps {

CharacteristicData cauchy_to_characteristic(const CauchyData& data) {
  int n = data.n(), dim = data.dim;
  CharacteristicData out;
  out.x0 = data.x0;
  out.dx = data.dx;
  out.dim = dim;
  out.phi_u.resize((size_t)n * dim);
  out.phi_v.resize((size_t)n * dim);
  double idx = 1.0 / data.dx;
  auto fval = [&](int k, int c) {
    if (k < 0) k = 0;
    if (k >= n) k = n - 1;
    return data.f[(size_t)k * dim + c];
  };
  for (int k = 0; k < n; ++k) {
    for (int c = 0; c < dim; ++c) {
      double fp;
      if (k >= 2 && k <= n - 3) {
        // 4th-order central difference
        fp = idx * (-fval(k + 2, c) + 8 * fval(k + 1, c) - 8 * fval(k - 1, c) + fval(k - 2, c)) / 12.0;
      } else if (k == 0) {
        fp = idx * (-1.5 * fval(0, c) + 2 * fval(1, c) - 0.5 * fval(2, c));
      } else if (k == n - 1) {
        fp = idx * (1.5 * fval(n - 1, c) - 2 * fval(n - 2, c) + 0.5 * fval(n - 3, c));
      } else {
        fp = idx * 0.5 * (fval(k + 1, c) - fval(k - 1, c));
      }
      double gv = data.g[(size_t)k * dim + c];
      out.phi_u[(size_t)k * dim + c] = 0.5 * (fp + gv);
      out.phi_v[(size_t)k * dim + c] = 0.5 * (fp - gv);
    }
  }
  return out;
}

namespace {

inline double sup_abs(const double* p, int dim) {
  double m = 0;
  for (int c = 0; c < dim; ++c) m = std::max(m, std::abs(p[c]));
  return m;
}

// Solve one cell for the time-marching corner (largest |t| within the
// cell). The known corners come in the order (opposite, u-adjacent,
// v-adjacent), where "u-adjacent" shares the u coordinate with the
// unknown. The mixed-difference identity over the cell gives
//   X = adj_u + adj_v - opp + h^2 Gamma(avg)(D_u, D_v)
// for both the future and the past orientation (the divided differences
// both flip sign between the two, which cancels in the bilinear Gamma).
void cell_solve(const TargetManifold& M, double h,
                const double* opp, const double* adj_u, const double* adj_v,
                double* out, bool retract) {
  int d = M.dim;
  thread_local std::vector<double> buf;
  buf.resize(5 * d);
  double* X = buf.data();       // current unknown estimate
  double* avg = X + d;
  double* Du = avg + d;
  double* Dv = Du + d;
  double* G = Dv + d;
  for (int c = 0; c < d; ++c) X[c] = adj_u[c] + adj_v[c] - opp[c];
  double w = 0.5 / h;
  for (int pass = 0; pass < 2; ++pass) {
    for (int c = 0; c < d; ++c) {
      avg[c] = 0.25 * (X[c] + opp[c] + adj_u[c] + adj_v[c]);
      Du[c] = w * ((X[c] + adj_u[c]) - (opp[c] + adj_v[c]));
      Dv[c] = w * ((adj_u[c] + opp[c]) - (X[c] + adj_v[c]));
    }
    M.gamma(avg, Du, Dv, G);
    for (int c = 0; c < d; ++c) X[c] = adj_u[c] + adj_v[c] - opp[c] + h * h * G[c];
  }
  if (retract && M.has_retraction) M.retract(X);
  std::memcpy(out, X, d * sizeof(double));
}

} // namespace

void advance_cell(const TargetManifold& M, double h,
                  const double* p00, const double* p10, const double* p01,
                  double* p11, bool retract) {
  // unknown corner (u+h, v+h): phi11 = phi10 + phi01 - phi00 - h^2 Gamma.
  // D_u = ((p10 + p11) - (p00 + p01)) / 2h, D_v = ((p01 + p11) - (p00 + p10)) / 2h.
  int d = M.dim;
  thread_local std::vector<double> buf;
  buf.resize(5 * d);
  double* X = buf.data();
  double* avg = X + d;
  double* Du = avg + d;
  double* Dv = Du + d;
  double* G = Dv + d;
  for (int c = 0; c < d; ++c) X[c] = p10[c] + p01[c] - p00[c];
  double w = 0.5 / h;
  for (int pass = 0; pass < 2; ++pass) {
    for (int c = 0; c < d; ++c) {
      avg[c] = 0.25 * (X[c] + p00[c] + p10[c] + p01[c]);
      Du[c] = w * ((p10[c] + X[c]) - (p00[c] + p01[c]));
      Dv[c] = w * ((p01[c] + X[c]) - (p00[c] + p10[c]));
    }
    M.gamma(avg, Du, Dv, G);
    for (int c = 0; c < d; ++c) X[c] = p10[c] + p01[c] - p00[c] - h * h * G[c];
  }
  if (retract && M.has_retraction) M.retract(X);
  std::memcpy(p11, X, d * sizeof(double));
}

SolveResult solve(const CauchyData& data, const TargetManifold& target, double T, double h,
                  const SolveOptions& opts) {
  int dim = target.dim;
  if (data.dim != dim) throw std::invalid_argument("solve: data/target dimension mismatch");

  double lo = data.x_min() - T - opts.pad - 2 * h;
  double hi = data.x_max() + T + opts.pad + 2 * h;
  // snap the origin to a multiple of h so refinements share node locations
  lo = std::floor(lo / h) * h;
  int N = (int)std::ceil((hi - lo) / h - 1e-9);
  NullGrid grid;
  grid.u0 = grid.v0 = lo;
  grid.h = h;
  grid.nu = grid.nv = N + 1;

  int dmax = 2 * (int)std::ceil(T / h - 1e-9) + 2;
  dmax = std::min(dmax, N);

  // data on the half-step lattice: index q <-> x = lo + q h/2
  CauchyData dat = data.resampled(lo, 0.5 * h, 2 * N + 1);

  SolveResult res;
  res.phi = GridField(grid, dim);
  res.band = dmax;
  GridField& F = res.phi;

  std::vector<double> fp(dim), fpp(dim), gm(dim), g2(dim), fv(dim), phitt(dim), tmp(dim);
  auto fq = [&](int q, int c) { return dat.f[(size_t)q * dim + c]; };

  // t = 0 diagonal
  for (int i = 0; i <= N; ++i)
    std::memcpy(F.at(i, i), dat.f.data() + (size_t)(2 * i) * dim, dim * sizeof(double));

  // t = +-h/2 diagonals by second-order Taylor expansion at the half nodes.
  // phi_tt = f'' + Gamma(f)(f',f') - Gamma(f)(g,g): substituting the data
  // into phi_uv = -Gamma(phi)(phi_u, phi_v) with 4 phi_uv = phi_xx - phi_tt
  // puts the spatial-gradient term and the velocity term on opposite signs.
  // Stencils stay inside [x - h/2, x + h/2] so node values depend only on
  // samples inside their backward light cone.
  double ht = 0.5 * h;
  for (int i = 0; i < N; ++i) {
    int q = 2 * i + 1;
    for (int c = 0; c < dim; ++c) {
      fv[c] = fq(q, c);
      fp[c] = (fq(q + 1, c) - fq(q - 1, c)) / h;
      fpp[c] = (fq(q + 1, c) - 2 * fq(q, c) + fq(q - 1, c)) / (ht * ht);
      gm[c] = dat.g[(size_t)q * dim + c];
    }
    target.gamma(fv.data(), fp.data(), fp.data(), phitt.data());
    target.gamma(fv.data(), gm.data(), gm.data(), tmp.data());
    for (int c = 0; c < dim; ++c) phitt[c] = fpp[c] + phitt[c] - tmp[c];
    double* up = F.at(i + 1, i);   // t = +h/2
    double* dn = F.at(i, i + 1);   // t = -h/2
    for (int c = 0; c < dim; ++c) {
      up[c] = fv[c] + ht * gm[c] + 0.5 * ht * ht * phitt[c];
      dn[c] = fv[c] - ht * gm[c] + 0.5 * ht * ht * phitt[c];
    }
    if (opts.retract && target.has_retraction) {
      target.retract(up);
      target.retract(dn);
    }
  }

  // guard on the value and on the divided difference toward one known neighbor
  auto guard = [&](int i, int j, int ni, int nj) {
    const double *p = F.at(i, j), *q = F.at(ni, nj);
    double dmaxc = 0;
    for (int c = 0; c < dim; ++c) dmaxc = std::max(dmaxc, std::abs(p[c] - q[c]) / h);
    if (sup_abs(p, dim) > opts.blowup_ceiling || dmaxc > opts.blowup_ceiling ||
        !std::isfinite(p[0]))
      throw BlowupError(grid.u(i), grid.v(j), grid.t(i, j));
  };

  // future half: unknown corner (u_i, v_j) of the cell [u_{i-1},u_i]x[v_j,v_{j+1}]
  for (int d = 2; d <= dmax; ++d) {
    for (int i = d; i <= N; ++i) {
      int j = i - d;
      cell_solve(target, h, F.at(i - 1, j + 1), F.at(i, j + 1), F.at(i - 1, j),
                 F.at(i, j), opts.retract);
      guard(i, j, i - 1, j);
    }
  }
  // past half: unknown corner (u_i, v_j) of the cell [u_i,u_{i+1}]x[v_{j-1},v_j]
  for (int d = 2; d <= dmax; ++d) {
    for (int j = d; j <= N; ++j) {
      int i = j - d;
      cell_solve(target, h, F.at(i + 1, j - 1), F.at(i, j - 1), F.at(i + 1, j),
                 F.at(i, j), opts.retract);
      guard(i, j, i + 1, j);
    }
  }
  return res;
}

GridField dalembert_free(const CauchyData& data, const NullGrid& grid) {
  int dim = data.dim;
  int N = grid.nu - 1;
  if (grid.nv != grid.nu) throw std::invalid_argument("dalembert_free: square lattice expected");
  CauchyData dat = data.resampled(grid.u0, grid.h, N + 1);
  // trapezoid primitive of g from the left edge of the lattice
  std::vector<double> Ig((size_t)(N + 1) * dim, 0.0);
  for (int k = 1; k <= N; ++k)
    for (int c = 0; c < dim; ++c)
      Ig[(size_t)k * dim + c] = Ig[(size_t)(k - 1) * dim + c] +
                                0.5 * grid.h * (dat.g[(size_t)(k - 1) * dim + c] +
                                                 dat.g[(size_t)k * dim + c]);
  std::vector<double> Fu((size_t)(N + 1) * dim), Gv((size_t)(N + 1) * dim);
  for (int k = 0; k <= N; ++k)
    for (int c = 0; c < dim; ++c) {
      double fk = dat.f[(size_t)k * dim + c], ik = Ig[(size_t)k * dim + c];
      Fu[(size_t)k * dim + c] = 0.5 * (fk + ik);
      Gv[(size_t)k * dim + c] = 0.5 * (fk - ik);
    }
  GridField out(grid, dim);
  for (int i = 0; i <= N; ++i)
    for (int j = 0; j <= N; ++j) {
      double* p = out.at(i, j);
      for (int c = 0; c < dim; ++c)
        p[c] = Fu[(size_t)i * dim + c] + Gv[(size_t)j * dim + c];
    }
  return out;
}

GridField inverse_box(const CellField& forcing) {
  const NullGrid& grid = forcing.grid;
  int dim = forcing.dim;
  int N = grid.nu - 1;
  if (grid.nv != grid.nu) throw std::invalid_argument("inverse_box: square lattice expected");
  GridField W(grid, dim);
  double h2 = grid.h * grid.h;
  // zero on t=0; symmetric seeds -h^2 F/2 on d = +-1 make both the cell
  // identity on the straddling cells and discrete zero Cauchy data exact
  for (int i = 0; i < N; ++i) {
    const double* Fc = forcing.at(i, i);
    double *up = W.at(i + 1, i), *dn = W.at(i, i + 1);
    for (int c = 0; c < dim; ++c) up[c] = dn[c] = -0.5 * h2 * Fc[c];
  }
  for (int d = 2; d <= N; ++d) {
    for (int i = d; i <= N; ++i) {
      int j = i - d;
      const double* Fc = forcing.at(i - 1, j);
      double* out = W.at(i, j);
      const double *a = W.at(i, j + 1), *b = W.at(i - 1, j), *o = W.at(i - 1, j + 1);
      for (int c = 0; c < dim; ++c) out[c] = a[c] + b[c] - o[c] - h2 * Fc[c];
    }
    for (int j = d; j <= N; ++j) {
      int i = j - d;
      const double* Fc = forcing.at(i, j - 1);
      double* out = W.at(i, j);
      const double *a = W.at(i + 1, j), *b = W.at(i, j - 1), *o = W.at(i + 1, j - 1);
      for (int c = 0; c < dim; ++c) out[c] = a[c] + b[c] - o[c] - h2 * Fc[c];
    }
  }
  return W;
}

double grid_x_seminorm(const GridField& phi) {
  int N = phi.grid.nu - 1, dim = phi.dim;
  double s = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < phi.grid.nv - 1; ++j) {
      const double *a = phi.at(i, j), *b = phi.at(i + 1, j), *c3 = phi.at(i, j + 1),
                   *d = phi.at(i + 1, j + 1);
      double q = 0;
      for (int c = 0; c < dim; ++c) {
        double m = d[c] - b[c] - c3[c] + a[c];
        q += m * m;
      }
      s += std::sqrt(q);
    }
  return s; // sum of h^2 |phi_uv| over cells
}

namespace {

// l11 norm of the lattice trace of a field along t=0 (used for increments;
// derivative by centered differences at spacing h, velocity read off the
// d = +-1 diagonals)
double trace_l11(const GridField& phi) {
  int N = phi.grid.nu - 1, dim = phi.dim;
  double h = phi.grid.h;
  double supf = 0, l1fp = 0, l1g = 0;
  for (int i = 0; i <= N; ++i) {
    double q = 0;
    for (int c = 0; c < dim; ++c) q += phi.at(i, i)[c] * phi.at(i, i)[c];
    supf = std::max(supf, std::sqrt(q));
  }
  for (int i = 1; i < N; ++i) {
    double q = 0;
    for (int c = 0; c < dim; ++c) {
      double d = 0.5 * (phi.at(i + 1, i + 1)[c] - phi.at(i - 1, i - 1)[c]) / h;
      q += d * d;
    }
    l1fp += std::sqrt(q) * h;
  }
  for (int i = 0; i < N; ++i) {
    double q = 0;
    for (int c = 0; c < dim; ++c) {
      double d = (phi.at(i + 1, i)[c] - phi.at(i, i + 1)[c]) / h;
      q += d * d;
    }
    l1g += std::sqrt(q) * h;
  }
  return supf + l1fp + l1g;
}

double sup_norm(const GridField& phi) {
  double m = 0;
  for (double v : phi.data) m = std::max(m, std::abs(v));
  return m;
}

} // namespace

PicardResult picard_iterate(const CauchyData& data, const TargetManifold& target,
                            double T, double h, const PicardOptions& opts) {
  int dim = target.dim;
  double lo = std::floor((data.x_min() - T - 2 * h) / h) * h;
  double hi = data.x_max() + T + 2 * h;
  int N = (int)std::ceil((hi - lo) / h - 1e-9);
  NullGrid grid;
  grid.u0 = grid.v0 = lo;
  grid.h = h;
  grid.nu = grid.nv = N + 1;

  GridField free = dalembert_free(data, grid);
  GridField cur = free;

  PicardResult res;
  std::vector<double> avg(dim), Du(dim), Dv(dim), G(dim);
  double prev_x_incr = -1, prev_sup_incr = -1;
  int above = 0;
  double w;

  for (int k = 0; k < opts.max_iterations; ++k) {
    // forcing -Gamma(phi)(phi_u, phi_v) at cell centers of the current iterate
    CellField Fc(grid, dim);
    w = 0.5 / h;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double *a = cur.at(i, j), *b = cur.at(i + 1, j), *c3 = cur.at(i, j + 1),
                     *d = cur.at(i + 1, j + 1);
        for (int c = 0; c < dim; ++c) {
          avg[c] = 0.25 * (a[c] + b[c] + c3[c] + d[c]);
          Du[c] = w * ((b[c] + d[c]) - (a[c] + c3[c]));
          Dv[c] = w * ((c3[c] + d[c]) - (a[c] + b[c]));
        }
        target.gamma(avg.data(), Du.data(), Dv.data(), G.data());
        double* out = Fc.at(i, j);
        for (int c = 0; c < dim; ++c) out[c] = -G[c];
      }
    GridField W = inverse_box(Fc);
    GridField next = free;
    for (size_t q = 0; q < next.data.size(); ++q) next.data[q] += W.data[q];

    GridField incr = next;
    for (size_t q = 0; q < incr.data.size(); ++q) incr.data[q] -= cur.data[q];
    double xi = grid_x_seminorm(incr) + trace_l11(incr);
    double si = sup_norm(incr);
    res.x_increments.push_back(xi);
    if (prev_x_incr > 0) {
      res.x_ratios.push_back(xi / prev_x_incr);
      res.sup_ratios.push_back(si / prev_sup_incr);
      if (res.x_ratios.back() > opts.divergence_ratio) {
        if (++above >= 2) {
          res.diverged = true;
          res.phi = std::move(next);
          res.iterations = k + 1;
          return res;
        }
      } else {
        above = 0;
      }
    }
    prev_x_incr = xi;
    prev_sup_incr = si;
    cur = std::move(next);
    res.iterations = k + 1;
    if (sup_norm(cur) > opts.blowup_ceiling) {
      res.diverged = true;
      break;
    }
    if (xi < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.phi = std::move(cur);
  return res;
}

} // namespace wavemaps
