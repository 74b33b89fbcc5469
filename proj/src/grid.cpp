#include "wavemaps/grid.hpp"

#include <cmath>
#include <cstring>

namespace wavemaps {

void GridField::du_at(int i, int j, double* out) const {
  double ih = 1.0 / grid.h;
  if (i > 0 && i < grid.nu - 1) {
    const double *p = at(i + 1, j), *m = at(i - 1, j);
    for (int c = 0; c < dim; ++c) out[c] = 0.5 * ih * (p[c] - m[c]);
  } else if (i == 0) {
    const double *a = at(0, j), *b = at(1, j), *c3 = at(2, j);
    for (int c = 0; c < dim; ++c) out[c] = ih * (-1.5 * a[c] + 2.0 * b[c] - 0.5 * c3[c]);
  } else {
    const double *a = at(i, j), *b = at(i - 1, j), *c3 = at(i - 2, j);
    for (int c = 0; c < dim; ++c) out[c] = ih * (1.5 * a[c] - 2.0 * b[c] + 0.5 * c3[c]);
  }
}

void GridField::dv_at(int i, int j, double* out) const {
  double ih = 1.0 / grid.h;
  if (j > 0 && j < grid.nv - 1) {
    const double *p = at(i, j + 1), *m = at(i, j - 1);
    for (int c = 0; c < dim; ++c) out[c] = 0.5 * ih * (p[c] - m[c]);
  } else if (j == 0) {
    const double *a = at(i, 0), *b = at(i, 1), *c3 = at(i, 2);
    for (int c = 0; c < dim; ++c) out[c] = ih * (-1.5 * a[c] + 2.0 * b[c] - 0.5 * c3[c]);
  } else {
    const double *a = at(i, j), *b = at(i, j - 1), *c3 = at(i, j - 2);
    for (int c = 0; c < dim; ++c) out[c] = ih * (1.5 * a[c] - 2.0 * b[c] + 0.5 * c3[c]);
  }
}

void GridField::duv_at(int i, int j, double* out) const {
  if (i <= 0 || i >= grid.nu - 1 || j <= 0 || j >= grid.nv - 1)
    throw std::out_of_range("duv_at: interior nodes only");
  double w = 0.25 / (grid.h * grid.h);
  const double *pp = at(i + 1, j + 1), *pm = at(i + 1, j - 1);
  const double *mp = at(i - 1, j + 1), *mm = at(i - 1, j - 1);
  for (int c = 0; c < dim; ++c) out[c] = w * (pp[c] - pm[c] - mp[c] + mm[c]);
}

std::vector<double> GridField::time_slice(int d) const {
  int lo = diag_lo(d), hi = diag_hi(d);
  if (hi < lo) return {};
  std::vector<double> out((size_t)(hi - lo + 1) * dim);
  for (int i = lo; i <= hi; ++i) {
    const double* p = at(i, i - d);
    std::memcpy(out.data() + (size_t)(i - lo) * dim, p, dim * sizeof(double));
  }
  return out;
}

uint64_t GridField::hash_region(int i_lo, int i_hi, int j_lo, int j_hi) const {
  uint64_t hsh = 1469598103934665603ull;
  for (int i = i_lo; i <= i_hi; ++i)
    for (int j = j_lo; j <= j_hi; ++j) {
      const unsigned char* b = reinterpret_cast<const unsigned char*>(at(i, j));
      for (size_t k = 0; k < dim * sizeof(double); ++k) {
        hsh ^= b[k];
        hsh *= 1099511628211ull;
      }
    }
  return hsh;
}

namespace {
// 4-point Lagrange interpolation on a uniform table; `ext` supplies
// out-of-range values.
void interp4(const std::vector<double>& tbl, int n, int dim, double x0, double dx,
             double x, double* out, bool const_ext) {
  auto val = [&](int k, int c) -> double {
    if (k < 0) k = const_ext ? 0 : -1;
    else if (k >= n) k = const_ext ? n - 1 : -1;
    if (k < 0) return 0.0;
    return tbl[(size_t)k * dim + c];
  };
  double s = (x - x0) / dx;
  int k1 = (int)std::floor(s);
  double r = s - k1;
  if (std::abs(r) < 1e-12 && k1 >= 0 && k1 < n) { // on a node
    for (int c = 0; c < dim; ++c) out[c] = val(k1, c);
    return;
  }
  if (std::abs(r - 1.0) < 1e-12 && k1 + 1 >= 0 && k1 + 1 < n) {
    for (int c = 0; c < dim; ++c) out[c] = val(k1 + 1, c);
    return;
  }
  // nodes k1-1 .. k1+2, Lagrange weights in r
  double w0 = -r * (r - 1) * (r - 2) / 6.0;
  double w1 = (r + 1) * (r - 1) * (r - 2) / 2.0;
  double w2 = -(r + 1) * r * (r - 2) / 2.0;
  double w3 = (r + 1) * r * (r - 1) / 6.0;
  for (int c = 0; c < dim; ++c)
    out[c] = w0 * val(k1 - 1, c) + w1 * val(k1, c) + w2 * val(k1 + 1, c) + w3 * val(k1 + 2, c);
}
} // namespace

void CauchyData::f_at(double x, double* out) const {
  interp4(f, n(), dim, x0, dx, x, out, /*const_ext=*/true);
}

void CauchyData::g_at(double x, double* out) const {
  interp4(g, n(), dim, x0, dx, x, out, /*const_ext=*/false);
}

CauchyData CauchyData::sample(int dim, double x0, double dx, int n,
                              const std::function<void(double, double*)>& f,
                              const std::function<void(double, double*)>& g) {
  CauchyData d;
  d.x0 = x0;
  d.dx = dx;
  d.dim = dim;
  d.f.resize((size_t)n * dim);
  d.g.resize((size_t)n * dim);
  for (int k = 0; k < n; ++k) {
    f(x0 + k * dx, d.f.data() + (size_t)k * dim);
    g(x0 + k * dx, d.g.data() + (size_t)k * dim);
  }
  return d;
}

CauchyData CauchyData::resampled(double nx0, double ndx, int nn) const {
  CauchyData d;
  d.x0 = nx0;
  d.dx = ndx;
  d.dim = dim;
  d.f.resize((size_t)nn * dim);
  d.g.resize((size_t)nn * dim);
  for (int k = 0; k < nn; ++k) {
    double x = nx0 + k * ndx;
    // exact copy when the query hits an existing node (keeps causality
    // stencils sample-local)
    f_at(x, d.f.data() + (size_t)k * dim);
    g_at(x, d.g.data() + (size_t)k * dim);
  }
  return d;
}

} // namespace wavemaps
