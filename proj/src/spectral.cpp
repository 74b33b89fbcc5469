#include "wavemaps/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wavemaps {

namespace {
std::mutex planner_mutex;
}

void dft(std::vector<cd>& a, int sign) {
  int n = (int)a.size();
  if (n == 0) return;
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    fftw_destroy_plan(plan);
  }
}

void dft2(std::vector<cd>& a, int rows, int cols, int sign) {
  if (a.empty()) return;
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    plan = fftw_plan_dft_2d(rows, cols, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(planner_mutex);
    fftw_destroy_plan(plan);
  }
}

double bump(double x) {
  double y = 1.0 - x * x;
  if (y <= 0) return 0.0;
  return std::exp(-1.0 / y) * std::exp(1.0); // normalized so bump(0) = 1
}

double cutoff12(double x) {
  double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  // smooth partition-of-unity-type ramp
  double t = a - 1.0;
  double b1 = std::exp(-1.0 / std::max(1e-300, 1.0 - t));
  double b0 = std::exp(-1.0 / std::max(1e-300, t));
  return b1 / (b0 + b1);
}

std::vector<cd> SpectralField1D::coeffs() const {
  std::vector<cd> c = s;
  dft(c, -1);
  double inv = 1.0 / n();
  for (auto& z : c) z *= inv;
  return c;
}

SpectralField1D SpectralField1D::from_coeffs(double period, const std::vector<cd>& c) {
  SpectralField1D f;
  f.period = period;
  f.s = c;
  dft(f.s, +1);
  return f;
}

SpectralField1D SpectralField1D::sample(double period, int n,
                                        const std::function<cd(double)>& fn) {
  SpectralField1D f;
  f.period = period;
  f.s.resize(n);
  for (int j = 0; j < n; ++j) f.s[j] = fn(period * j / n);
  return f;
}

std::vector<cd> SpectralField2D::coeffs() const {
  std::vector<cd> c = s;
  dft2(c, nu, nv, -1);
  double inv = 1.0 / ((double)nu * nv);
  for (auto& z : c) z *= inv;
  return c;
}

SpectralField2D SpectralField2D::from_coeffs(double Pu, double Pv, int nu, int nv,
                                             const std::vector<cd>& c) {
  SpectralField2D f;
  f.period_u = Pu;
  f.period_v = Pv;
  f.nu = nu;
  f.nv = nv;
  f.s = c;
  dft2(f.s, nu, nv, +1);
  return f;
}

SpectralField2D SpectralField2D::sample(double Pu, double Pv, int nu, int nv,
                                        const std::function<cd(double, double)>& fn) {
  SpectralField2D f;
  f.period_u = Pu;
  f.period_v = Pv;
  f.nu = nu;
  f.nv = nv;
  f.s.resize((size_t)nu * nv);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) f.at(i, j) = fn(Pu * i / nu, Pv * j / nv);
  return f;
}

namespace {

struct EtaTable {
  double delta;
  std::vector<double> vals; // eta_hat(j delta), j = 0..count-1 (even symmetry)
};

std::mutex td_mutex;
std::map<std::pair<long long, std::pair<double, int>>, TildeD> td_cache;
std::map<long long, EtaTable> eta_cache; // keyed by rounded delta

// Tabulate eta_hat(j delta) = int_{-1}^{1} eta(x) e^{-i j delta x} dx by a
// single FFT: the rectangle rule over a full period P = 2 pi / delta is
// spectrally accurate for the smooth compactly supported bump, and the only
// residual error is frequency aliasing at |zeta| >= n_fft delta / 2, where
// eta_hat has long since decayed below machine precision.
const EtaTable& eta_table(double delta, double Z) {
  long long key = (long long)std::llround(delta * 1e12);
  auto it = eta_cache.find(key);
  if (it != eta_cache.end()) return it->second;
  const double pi = 3.141592653589793238462643383279502884;
  int count = (int)std::ceil(Z / delta) + 1;
  int n_fft = 1;
  while (n_fft < 8 * count) n_fft <<= 1;
  double P = 2 * pi / delta;
  double dx = P / n_fft;
  std::vector<cd> a(n_fft, 0.0);
  for (int k = 0; k < n_fft; ++k) {
    double x = k * dx;
    if (x > P / 2) x -= P; // wrap to (-P/2, P/2]
    if (std::abs(x) < 1.0) a[k] = bump(x);
  }
  dft(a, -1);
  EtaTable t;
  t.delta = delta;
  t.vals.resize(count);
  for (int j = 0; j < count; ++j) t.vals[j] = a[j].real() * dx;
  return eta_cache.emplace(key, std::move(t)).first->second;
}

TildeD build_tilde_d(double s, double period, int n) {
  const double pi = 3.141592653589793238462643383279502884;
  const double Z = 1200.0; // eta_hat truncation; tail ~ e^{-c sqrt(Z)}
  double grid_step = 2 * pi / period;
  int K = std::max(1, (int)std::ceil(grid_step / 0.05));
  double delta = grid_step / K;

  const EtaTable& et = eta_table(delta, Z);
  int Zi = (int)et.vals.size() - 1;

  // linear convolution  C_m = sum_j A_{m-j} B_j, A_k = <k delta>^s,
  // B_j = eta_hat(j delta), m covering the field's frequency range.
  int half = K * (n / 2 + 1);
  int Alen = 2 * (half + Zi) + 1; // indices -half-Zi .. half+Zi
  int Blen = 2 * Zi + 1;
  int clen = 1;
  while (clen < Alen + Blen) clen <<= 1;
  std::vector<cd> A(clen, 0.0), B(clen, 0.0);
  for (int k = -(half + Zi); k <= half + Zi; ++k) {
    double x = std::abs(k) * delta;
    A[(k + half + Zi)] = std::pow(1.0 + x * x, 0.5 * s);
  }
  for (int j = -Zi; j <= Zi; ++j) B[(j + Zi) % clen] = et.vals[std::abs(j)];
  // shift B so that index j=0 sits at array position Zi -> after conv,
  // C at position p corresponds to m = p - (half+Zi) - Zi
  dft(A, -1);
  dft(B, -1);
  for (int k = 0; k < clen; ++k) A[k] *= B[k];
  dft(A, +1);
  double invc = 1.0 / clen;

  double norm0 = 0;
  for (int j = -Zi; j <= Zi; ++j) norm0 += et.vals[std::abs(j)];

  TildeD td;
  td.s = s;
  td.period = period;
  td.n = n;
  td.m.resize(n);
  auto conv_at = [&](int m) {
    int p = m + half + 2 * Zi;
    return A[p].real() * invc;
  };
  for (int k = 0; k < n; ++k) {
    int kk = k <= n / 2 - 1 ? k : k - n;
    td.m[k] = conv_at(K * kk) / norm0;
  }
  return td;
}

} // namespace

const TildeD& TildeD::get(double s, double period, int n) {
  std::lock_guard<std::mutex> lk(td_mutex);
  auto key = std::make_pair((long long)std::llround(s * 1e9), std::make_pair(period, n));
  auto it = td_cache.find(key);
  if (it != td_cache.end()) return it->second;
  return td_cache.emplace(key, build_tilde_d(s, period, n)).first->second;
}

SpectralField1D tilde_D(const SpectralField1D& f, double s) {
  const TildeD& td = TildeD::get(s, f.period, f.n());
  std::vector<cd> c = f.coeffs();
  td.apply(c);
  return SpectralField1D::from_coeffs(f.period, c);
}

double top_octave_fraction(const SpectralField1D& f) {
  std::vector<cd> c = f.coeffs();
  int n = f.n();
  double total = 0, top = 0;
  for (int k = 0; k < n; ++k) {
    double a = std::norm(c[k]);
    total += a;
    if (std::abs(f.signed_index(k)) >= n / 4) top += a;
  }
  return total > 0 ? top / total : 0.0;
}

} // namespace wavemaps
