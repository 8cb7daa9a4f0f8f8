#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nldiv/linalg.hpp"

// Matrix-valued coefficient fields.  MatrixFieldA is the local-side object
// (x -> elliptic symmetric matrix); MatrixFieldM modulates the nonlocal
// kernel ((x,y) -> matrix).  Fields are immutable closures over immutable
// data and safe to evaluate from any thread.

namespace nldiv {

struct MatrixFieldA {
  int n = 0;
  double lambda_lo = 0.0; // uniform eigenvalue bounds
  double lambda_hi = 0.0;
  std::function<SymMat(const Vec&)> eval;
  std::optional<double> lipschitz; // of x -> A(x) in operator norm, if known

  SymMat operator()(const Vec& x) const { return eval(x); }
};

// Even, positive semidefinite perturbation with H(0) = 0; pluggable hook in
// the A -> M construction.
struct HPerturbation {
  std::function<SymMat(const Vec&)> eval;
  double bound = 0.0; // sup_y ||H(y)||

  static HPerturbation zero(int n);
};

struct MatrixFieldM {
  int n = 0;
  double alpha = 0.0; // beta|xi| <= |M(x-y,y) xi| <= alpha|xi|
  double beta = 0.0;
  std::function<Mat(const Vec& x, const Vec& y)> eval;
  std::optional<double> lipschitz; // joint Lipschitz constant, if known
  // radial limit M^inf(x, psi) = lim_{t->inf} M(x - t psi, t psi); required
  // by the s->0 experiment with infinite horizon
  std::function<Mat(const Vec& x, const Vec& psi)> m_infty;
  // set when M does not depend on (x,y); enables exact fast paths
  std::optional<Mat> constant_value;

  Mat operator()(const Vec& x, const Vec& y) const { return eval(x, y); }

  static MatrixFieldM constant(const Mat& m);
  static MatrixFieldM identity(int n);
};

// Built-in catalogue of coefficient fields, selectable by name from configs:
//   identity          A = Id
//   anisotropic-diag  A = diag(d), constant
//   rotating-field    eigenvalues d in a frame rotating with x_1
//   step-field        A = lo*Id for x_1 < 0, hi*Id otherwise
MatrixFieldA field_identity(int n);
MatrixFieldA field_constant(int n, const SymMat& a);
MatrixFieldA field_anisotropic_diag(int n, const Vec& d);
MatrixFieldA field_rotating(int n, const Vec& eigs, double omega);
MatrixFieldA field_step(int n, double lo, double hi);
MatrixFieldA field_by_name(const std::string& name, int n);

// Entrywise mollification with the polynomial bump
//   eta(x) = c (1 - |x/eps|^2)_+^2,  eps = 1/ell,
// evaluated by Gauss quadrature with discretely normalized weights, so
// constants are reproduced exactly and eigenvalue bounds are preserved.
MatrixFieldA mollify_A_field(const MatrixFieldA& a, int ell);

} // namespace nldiv
