#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nldiv/fields.hpp"
#include "nldiv/linalg.hpp"

// Pointwise side of the nonlocal operator: kernel evaluation, the kernel
// diagnostics (two-sided bounds, symmetry, almost-symmetry integral,
// perturbative estimate) and the principal-value application to smooth
// probes.

namespace nldiv {

struct KernelSpec {
  MatrixFieldM m;
  double rho = 0.0; // horizon, positive or +infinity
  double s = 0.0;   // order in (0,1)
  int n = 0;
  double c = 0.0E0; // c_{n,s}
  // measured almost-symmetry integral, cached by ensure_c_sharp
  std::optional<double> c_sharp;

  double exponent() const { return n + 2.0 * s; }
};

// Fills the normalizing constant from (n, s); validates rho > 0, s in (0,1).
KernelSpec make_kernel(const MatrixFieldM& m, double rho, double s);

// K(x,z) = c 1_{|x-z|<rho} / |M(z, x-z)(x-z)|^{n+2s}; zero beyond the
// horizon.  Throws std::domain_error at x = z.
double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& z);

struct KernelBoundsReport {
  double c_low = 0.0;  // c / alpha^{n+2s}
  double c_high = 0.0; // c / beta^{n+2s}
  double max_bound_violation = 0.0;
  double max_symmetry_violation = 0.0; // |K(x,z) - K(z,x)|, scaled by K
};

// Checks c_low <= K(x,z)|x-z|^{n+2s} <= c_high and K(x,z) = K(z,x) on the
// given point pairs (pairs with coincident points are skipped).
KernelBoundsReport kernel_bounds_check(const KernelSpec& k,
                                       const std::vector<std::pair<Vec, Vec>>& samples);

// int_{B_1} |y| |K(x,x+y) - K(x,x-y)| dy by graded radial-angular
// quadrature; zero for constant fields.
double almost_symmetry_integral(const KernelSpec& k, const Vec& x);

// Computes and stores the almost-symmetry constant on the spec.
double ensure_c_sharp(KernelSpec& k, const Vec& x);

// Smooth probe with two continuous derivatives and compact (or numerically
// compact) support.  Piecewise-polynomial probes can declare their kink
// lattice through grid_hint/grid_anchor so panelled quadratures align with
// it.
struct SmoothProbe {
  int n = 0;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad;
  double support_radius = 0.0;
  double c2_norm = 0.0;     // bound on |u|, |grad u|, |D^2 u|
  double grid_hint = 0.0;   // lattice spacing of derivative kinks, 0 if none
  double grid_anchor = 0.0; // a lattice point

  double operator()(const Vec& x) const { return f(x); }
};

SmoothProbe probe_gaussian(int n);
SmoothProbe probe_poly_bump(int n);
SmoothProbe probe_odd(int n);
SmoothProbe probe_by_name(const std::string& name, int n);

// L_K u(x).  Direct integration for s < 1/2; for s >= 1/2 the symmetrized
// split (difference-of-kernels term plus second-difference term on the
// near ball, far field beyond), which requires Lipschitz metadata on M.
// Relative quadrature error ~1e-5 for the catalogue probes.
double apply_pointwise(const KernelSpec& k, const SmoothProbe& u, const Vec& x);

struct PerturbationReport {
  double max_ratio = 0.0; // sup | |Ly|^-p - |Ny|^-p | |y|^p / ||L-N||
  double norm_gap = 0.0;
};

// Probes the perturbative kernel estimate on sample directions.
// Requires |L xi|, |N xi| within [beta, alpha] on the unit sphere.
PerturbationReport perturbation_estimate_check(const Mat& l, const Mat& n_mat,
                                               double s,
                                               const std::vector<Vec>& ys);

} // namespace nldiv
