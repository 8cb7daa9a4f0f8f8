#pragma once

#include <memory>
#include <vector>

#include "nldiv/kernel.hpp"
#include "nldiv/nonlinearity.hpp"
#include "nldiv/solver.hpp"

// Numerical realization of the limit results: the fractional bilinear form
// on smooth probes, its s->1 recovery of the local divergence form, the
// s->0 mass/vanishing limit, the s-sweep of solutions toward the local
// solution, and the rough-coefficient mollification sweep.

namespace nldiv {

struct FormLimitRow {
  double s = 0.0;
  double value = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
};

struct FormLimitReport {
  std::vector<FormLimitRow> rows; // s strictly increasing
  double target = 0.0;
  bool monotone_error_trend = true; // flagged, not fatal
};

// B_s(u, phi) = (c_{n,s}/2) iint_{R^n x B_rho}
//   (u(x)-u(x-y))(phi(x)-phi(x-y)) / |M(x-y,y) y|^{n+2s} dx dy.
// Shares its node layout and (for space-constant M) probe-correlation tables
// across s values; n in {1,2}.
class FormEvaluator {
 public:
  FormEvaluator(const MatrixFieldM& m, double rho, const SmoothProbe& u,
                const SmoothProbe& phi);
  ~FormEvaluator();
  FormEvaluator(FormEvaluator&&) noexcept;

  double value(double s) const;
  // local limit target sum_ij int A_ij d_i u d_j phi with A recovered from
  // M(.,0) by sphere quadrature
  double local_target() const;
  // s->0 target: (1/omega_{n-1}) int u phi int_S |M^inf psi|^{-n}, infinite
  // horizon only; throws std::domain_error without M^inf metadata
  double mass_target() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double fractional_form(const SmoothProbe& u, const SmoothProbe& phi,
                       const KernelSpec& k);

// Probe view of a discrete function (piecewise-linear values, elementwise
// slopes); lets the form evaluators accept mesh functions.
SmoothProbe probe_from_discrete(const DiscreteFunction& u);

// sum_ij int A_ij(x) d_i u d_j phi dx by panelled Gauss quadrature
double local_form(const SmoothProbe& u, const SmoothProbe& phi,
                  const MatrixFieldA& a);

FormLimitReport form_limit_s1(const SmoothProbe& u, const SmoothProbe& phi,
                              const MatrixFieldM& m, double rho,
                              const std::vector<double>& s_grid);

FormLimitReport form_limit_s0(const SmoothProbe& u, const SmoothProbe& phi,
                              const MatrixFieldM& m, double rho,
                              const std::vector<double>& s_grid);

struct SweepRow {
  double s = 0.0;
  double dist_l2 = 0.0;   // ||u_s - u_1||_{L^2}
  double dist_linf = 0.0; // nodewise max difference
  DiscreteFunction u;
  SolverReport report;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  DiscreteFunction u_local;
  SolverReport local_report;
};

// Solves the nonlocal problem for each s (kernel built from A through the
// spectral correspondence) and the local problem once.
SweepReport sweep_s(const MatrixFieldA& a, const Mesh& mesh,
                    const ProblemData& data, const std::vector<double>& s_grid,
                    double rho, const SolveOptions& opts = {},
                    const AssemblyOptions& asm_opts = {});

struct SmoothingRow {
  int ell = 0;
  double dist_local_to_rough = 0.0;    // ||u_1(A_ell) - u_1(A)||
  std::vector<double> dist_s_to_rough; // ||u_{s,ell} - u_1(A)|| per s
  SweepReport sweep;
};

struct SmoothingReport {
  std::vector<SmoothingRow> rows;
  DiscreteFunction u_local_rough;
};

// Mollifies a rough A at each smoothing index and runs the s-sweep against
// the rough-coefficient local solution (inner limit in s, outer in ell).
SmoothingReport smoothing_sweep(const MatrixFieldA& a_rough,
                                const std::vector<int>& ell_grid,
                                const std::vector<double>& s_grid,
                                const Mesh& mesh, const ProblemData& data,
                                double rho, const SolveOptions& opts = {},
                                const AssemblyOptions& asm_opts = {});

struct MollifiedSeminormRow {
  double eps = 0.0;
  double seminorm = 0.0;
};

struct MollifiedSeminormReport {
  double base_seminorm = 0.0;
  std::vector<MollifiedSeminormRow> rows;
  double max_excess = 0.0; // max seminorm increase over the base
};

// Nodal convolution with the polynomial bump at each radius; the smoothed
// seminorm must not exceed the original.
MollifiedSeminormReport mollified_seminorm_check(const DiscreteFunction& u,
                                                 const std::vector<double>& eps_grid,
                                                 double s);

} // namespace nldiv
