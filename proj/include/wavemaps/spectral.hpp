#pragma once
#include <complex>
#include <functional>
#include <vector>

namespace wavemaps {

using cd = std::complex<double>;

// FFTW-backed transforms; any length. sign = -1 forward (unnormalized),
// +1 inverse (unnormalized). Thread-safe (planner serialized).
void dft(std::vector<cd>& a, int sign);
void dft2(std::vector<cd>& a, int rows, int cols, int sign);

inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

// standard compactly supported bump, = exp(-1/(1-x^2)) on (-1,1), peak 1
double bump(double x);
// smoothed cutoff: 1 on |x|<=1, 0 on |x|>=2, monotone in between
double cutoff12(double x);

// Periodic sampled field; coefficient convention: forward transform with
// 1/n so a pure mode e^{ikx} carries coefficient 1. Norms are plain l^2
// sums of weighted coefficients (single mode -> <k>^s with period 2 pi).
struct SpectralField1D {
  double period = 2 * 3.141592653589793238462643383279502884;
  std::vector<cd> s; // samples at x = period * j / n

  int n() const { return (int)s.size(); }
  int signed_index(int k) const { return k <= n() / 2 - 1 ? k : k - n(); }
  double xi(int k) const {
    return 2 * 3.141592653589793238462643383279502884 * signed_index(k) / period;
  }
  std::vector<cd> coeffs() const;
  static SpectralField1D from_coeffs(double period, const std::vector<cd>& c);
  static SpectralField1D sample(double period, int n, const std::function<cd(double)>& f);
};

struct SpectralField2D {
  double period_u = 2 * 3.141592653589793238462643383279502884;
  double period_v = 2 * 3.141592653589793238462643383279502884;
  int nu = 0, nv = 0;
  std::vector<cd> s; // row-major (u index, v index)

  cd& at(int i, int j) { return s[(size_t)i * nv + j]; }
  const cd& at(int i, int j) const { return s[(size_t)i * nv + j]; }
  double xi_u(int k) const {
    int kk = k <= nu / 2 - 1 ? k : k - nu;
    return 2 * 3.141592653589793238462643383279502884 * kk / period_u;
  }
  double xi_v(int k) const {
    int kk = k <= nv / 2 - 1 ? k : k - nv;
    return 2 * 3.141592653589793238462643383279502884 * kk / period_v;
  }
  std::vector<cd> coeffs() const; // 1/(nu nv) normalization
  static SpectralField2D from_coeffs(double Pu, double Pv, int nu, int nv,
                                     const std::vector<cd>& c);
  static SpectralField2D sample(double Pu, double Pv, int nu, int nv,
                                const std::function<cd(double, double)>& f);
};

// The mollified fractional derivative multiplier
//   m_s(xi) = (<.>^s * eta_hat)(xi) / (integral of eta_hat),
// eta the standard bump; m_0 == 1 by normalization and the kernel of the
// corresponding operator is supported in [-1,1]. Values are tabulated on
// the frequency lattice of a given (period, n) pair and cached.
struct TildeD {
  double s = 0;
  double period = 0;
  int n = 0;
  std::vector<double> m; // m[k] at frequency xi(k), FFT index order

  static const TildeD& get(double s, double period, int n);
  void apply(std::vector<cd>& coeffs) const {
    for (int k = 0; k < n; ++k) coeffs[k] *= m[k];
  }
};

// apply D-tilde^s to a sampled field (returns new field)
SpectralField1D tilde_D(const SpectralField1D& f, double s);

// leakage monitor: fraction of l^2 coefficient mass in the top octave
double top_octave_fraction(const SpectralField1D& f);

} // namespace wavemaps
