#pragma once
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavemaps {

using Vec = std::vector<double>;
using Mat = std::vector<double>; // row-major d x d

struct TangentVector {
  Vec base;      // chart point
  Vec components;
};

// Multivariate power series sum_a c_a x^a with an analyticity certificate:
// |c_a| <= C / r^{|a|}. Evaluation truncates adaptively so the certified
// tail bound stays below `tol`; throws if |x| >= r (outside the disk the
// certificate gives nothing).
struct PowerSeries {
  struct Term {
    std::vector<int> exps;
    double coeff;
  };
  int dim = 1;
  std::vector<Term> terms;
  double growth_C = 1.0;
  double radius = 1.0;

  double eval(const Vec& x, double tol = 1e-12) const;
};

// Target manifold in a fixed chart (or extrinsically embedded). `gamma`
// is the contracted second fundamental form / Christoffel action
// Gamma(p)(X,Y) appearing in phi_uv = -Gamma(phi)(phi_u, phi_v).
struct TargetManifold {
  std::string name;
  int dim = 1;
  std::function<void(const double* p, double* h)> metric;                 // h: dim*dim
  std::function<void(const double* p, const double* X, const double* Y, double* out)> gamma;
  std::function<void(double* p)> retract; // nullable: projection back to the target
  bool has_retraction = false;

  void gamma_at(const Vec& p, const Vec& X, const Vec& Y, Vec& out) const {
    out.resize(dim);
    gamma(p.data(), X.data(), Y.data(), out.data());
  }
};

// |X|_h at base point p.
double metric_length(const TargetManifold& M, const double* p, const double* X);
inline double metric_length(const TargetManifold& M, const Vec& p, const Vec& X) {
  return metric_length(M, p.data(), X.data());
}

// Unit sphere S^{m-1} in R^m, extrinsic coordinates. Gamma(p)(X,Y) = p (X.Y),
// metric is the ambient Euclidean one, retraction p -> p/|p|.
TargetManifold sphere_extrinsic(int ambient_dim);

// Flat circle R/2piZ in the angle chart: h = 1, Gamma = 0.
TargetManifold circle_intrinsic();

// S^2 in the stereographic chart (round metric 4 delta / (1+|x|^2)^2),
// closed-form Christoffels. Used for small-data chart runs.
TargetManifold sphere_stereographic();

// General analytic chart: metric components h_{ab} and Christoffels
// Gamma^k_{ab} given as certified power series (row-major storage,
// gamma_series[k*dim*dim + a*dim + b]). The (C, r) certificates are
// recorded and drive series truncation; they are not re-derived.
TargetManifold analytic_chart(int dim,
                              std::vector<PowerSeries> metric_series,
                              std::vector<PowerSeries> gamma_series);

} // namespace wavemaps
