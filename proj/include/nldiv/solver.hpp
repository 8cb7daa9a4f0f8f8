#pragma once

#include <string>
#include <vector>

#include "nldiv/assembly.hpp"
#include "nldiv/fields.hpp"
#include "nldiv/mesh.hpp"
#include "nldiv/nonlinearity.hpp"

// Convex minimization of
//   J(u) = 1/2 <S u, u> + int eta H(u) - int zeta u
// (damped Newton with Armijo backtracking; mass integrals by nodal
// quadrature) and the outer data-truncation loop that drives it to the
// solution of L_K u + a h(u) = f with merely integrable dominated data.

namespace nldiv {

struct SolveOptions {
  double tol_newton = 1e-11;   // gradient norm, scaled by (1 + ||zeta||)
  int max_newton = 80;
  double tol_outer = 1e-7;     // scaled by (1 + ||f||_L1)
  // truncation error decays like 1/j, so reaching tol_outer needs j of the
  // order 1/tol_outer; stages are cheap under warm starts
  int max_outer_doublings = 30;
  std::vector<double> initial; // optional warm start
};

struct SolverReport {
  double norm_inf = 0.0;
  double bound_inf = 0.0;   // h^{-1}(Q); -1 in linear mode
  double energy = 0.0;      // iint (u(x)-u(z))^2 K = 2 <Su,u>
  double bound_energy = 0.0; // 2 h^{-1}(Q) (||f||_1 + Q ||a||_1); -1 linear
  int outer_iters = 0;
  int newton_iters = 0;
  double cert_error = 0.0;
  bool linear_mode = false;
};

// J and its exact gradient S u + w.*eta.*h(u) - w.*zeta (w = nodal weights).
double energy_J(const std::vector<double>& u, const StiffnessMatrix& s,
                const std::vector<double>& eta, const std::vector<double>& zeta,
                const Nonlinearity& nl);
std::vector<double> grad_J(const std::vector<double>& u, const StiffnessMatrix& s,
                           const std::vector<double>& eta,
                           const std::vector<double>& zeta,
                           const Nonlinearity& nl);

// Unique minimizer of the strictly convex J; requires eta >= 0.
// Throws std::runtime_error if the line search stalls.
DiscreteFunction minimize_J(const StiffnessMatrix& s, const std::vector<double>& eta,
                            const std::vector<double>& zeta, const Nonlinearity& nl,
                            const SolveOptions& opts = {},
                            int* newton_iters = nullptr);

// Outer loop over truncated data (f_j, a_j), j doubling, until the iterates
// stabilize in L2; checks the maximum-principle and energy bounds.
std::pair<DiscreteFunction, SolverReport> solve_semilinear(
    const KernelSpec& k, const Mesh& mesh, const ProblemData& data,
    const SolveOptions& opts = {}, const AssemblyOptions& asm_opts = {});

// Same data pipeline against the local P1 form int A u' v' (element-midpoint
// coefficient quadrature).
std::pair<DiscreteFunction, SolverReport> solve_local_fem(
    const MatrixFieldA& a, const Mesh& mesh, const ProblemData& data,
    const SolveOptions& opts = {});

// dense SPD solve, Cholesky
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b);

// local P1 stiffness as a StiffnessMatrix-compatible object
StiffnessMatrix assemble_local_stiffness(const MatrixFieldA& a, const Mesh& mesh);

} // namespace nldiv
