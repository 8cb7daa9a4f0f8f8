#include "nldiv/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "nldiv/simd/simd.hpp"

namespace nldiv {

namespace {

double nodal_weight(const Mesh& m) { return m.h(); }

double vec_norm(const std::vector<double>& v) {
  return std::sqrt(simd::dot(v.data(), v.data(), v.size()));
}

} // namespace

std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  for (int j = 0; j < n; ++j) {
    double d = at(j, j);
    for (int k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
    if (!(d > 0.0))
      throw std::runtime_error("cholesky_solve: matrix not positive definite");
    const double l = std::sqrt(d);
    at(j, j) = l;
    for (int i = j + 1; i < n; ++i) {
      double v = at(i, j);
      for (int k = 0; k < j; ++k) v -= at(i, k) * at(j, k);
      at(i, j) = v / l;
    }
  }
  // forward then backward substitution
  for (int i = 0; i < n; ++i) {
    double v = b[static_cast<std::size_t>(i)];
    for (int k = 0; k < i; ++k) v -= at(i, k) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = v / at(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double v = b[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) v -= at(k, i) * b[static_cast<std::size_t>(k)];
    b[static_cast<std::size_t>(i)] = v / at(i, i);
  }
  return b;
}

double energy_J(const std::vector<double>& u, const StiffnessMatrix& s,
                const std::vector<double>& eta, const std::vector<double>& zeta,
                const Nonlinearity& nl) {
  const double w = nodal_weight(s.mesh);
  double j = 0.5 * s.quad_form(u);
  for (std::size_t i = 0; i < u.size(); ++i)
    j += w * (eta[i] * nl.primitive(u[i]) - zeta[i] * u[i]);
  return j;
}

std::vector<double> grad_J(const std::vector<double>& u, const StiffnessMatrix& s,
                           const std::vector<double>& eta,
                           const std::vector<double>& zeta,
                           const Nonlinearity& nl) {
  std::vector<double> g = s.apply(u);
  const double w = nodal_weight(s.mesh);
  for (std::size_t i = 0; i < u.size(); ++i)
    g[i] += w * (eta[i] * nl.h(u[i]) - zeta[i]);
  return g;
}

DiscreteFunction minimize_J(const StiffnessMatrix& s, const std::vector<double>& eta,
                            const std::vector<double>& zeta, const Nonlinearity& nl,
                            const SolveOptions& opts, int* newton_iters) {
  const int n = s.nd;
  const double w = nodal_weight(s.mesh);
  std::vector<double> u = opts.initial.empty()
                              ? std::vector<double>(static_cast<std::size_t>(n), 0.0)
                              : opts.initial;
  const double zeta_norm = vec_norm(zeta);
  const double gtol = opts.tol_newton * (1.0 + zeta_norm);

  double jcur = energy_J(u, s, eta, zeta, nl);
  for (int it = 0; it < opts.max_newton; ++it) {
    std::vector<double> g = grad_J(u, s, eta, zeta, nl);
    if (vec_norm(g) <= gtol) break;
    if (newton_iters) ++*newton_iters;

    // Hessian = S + diag(w eta h'(u)); a noisy slope at a kink of h can
    // leave the system indefinite, in which case the step degrades to
    // steepest descent
    std::vector<double> hess = s.a;
    for (int i = 0; i < n; ++i)
      hess[static_cast<std::size_t>(i) * n + i] +=
          w * eta[static_cast<std::size_t>(i)] * nl.slope(u[static_cast<std::size_t>(i)]);
    std::vector<double> rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) rhs[i] = -g[i];
    std::vector<double> d;
    try {
      d = cholesky_solve(std::move(hess), rhs);
    } catch (const std::runtime_error&) {
      d = rhs;
    }

    const double slope = simd::dot(g.data(), d.data(), g.size());
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      std::vector<double> trial = u;
      for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += t * d[i];
      const double jt = energy_J(trial, s, eta, zeta, nl);
      if (jt <= jcur + 1e-4 * t * slope) {
        u = std::move(trial);
        jcur = jt;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error(
          "minimize_J: line search stalled, |grad| = " + std::to_string(vec_norm(g)));
  }

  DiscreteFunction out = DiscreteFunction::zero(s.mesh);
  out.coeffs = std::move(u);
  return out;
}

namespace {

std::pair<DiscreteFunction, SolverReport> outer_truncation_loop(
    const StiffnessMatrix& s, const ProblemData& data, const SolveOptions& opts) {
  const Mesh& mesh = s.mesh;
  SolverReport rep;
  rep.cert_error = s.cert_error;
  rep.linear_mode = data.linear_mode;

  const double f_l1 = l1_norm(mesh, data.f, data.f_bnd[0], data.f_bnd[1]);
  const double a_l1 = l1_norm(mesh, data.a, data.a_bnd[0], data.a_bnd[1]);
  const double tol = opts.tol_outer * (1.0 + f_l1);

  SolveOptions inner = opts;
  DiscreteFunction u = DiscreteFunction::zero(mesh);
  int newton_total = 0;
  bool converged = false;
  int j = 1;
  DiscreteFunction prev = u;
  for (int k = 0; k < opts.max_outer_doublings; ++k, j *= 2) {
    const TruncatedData td = truncate_data(data, j);
    inner.initial = u.coeffs;
    u = minimize_J(s, td.a_j, td.f_j, data.nl, inner, &newton_total);
    ++rep.outer_iters;
    if (k > 0 && l2_distance(u, prev) <= tol) {
      converged = true;
      prev = u;
      break;
    }
    prev = u;
  }
  if (!converged && opts.max_outer_doublings > 1) {
    // the iterates must be Cauchy once the truncation saturates
    throw std::runtime_error(
        "solve: outer truncation loop failed to stabilize within " +
        std::to_string(opts.max_outer_doublings) + " doublings");
  }
  rep.newton_iters = newton_total;

  rep.norm_inf = u.linf();
  rep.energy = 2.0 * s.quad_form(u.coeffs);
  if (data.linear_mode) {
    rep.bound_inf = -1.0;
    rep.bound_energy = -1.0;
  } else {
    const double hinv_q = data.nl.h_inverse(data.Q);
    rep.bound_inf = hinv_q;
    rep.bound_energy = 2.0 * hinv_q * (f_l1 + data.Q * a_l1);
  }
  return {u, rep};
}

} // namespace

std::pair<DiscreteFunction, SolverReport> solve_semilinear(
    const KernelSpec& k, const Mesh& mesh, const ProblemData& data,
    const SolveOptions& opts, const AssemblyOptions& asm_opts) {
  const StiffnessMatrix s = assemble_stiffness(k, mesh, asm_opts);
  return outer_truncation_loop(s, data, opts);
}

StiffnessMatrix assemble_local_stiffness(const MatrixFieldA& a, const Mesh& mesh) {
  if (a.n != 1)
    throw std::runtime_error("assemble_local_stiffness: only 1d meshes");
  const int nd = mesh.dofs();
  const double h = mesh.h();
  StiffnessMatrix s;
  s.mesh = mesh;
  s.nd = nd;
  s.s = 1.0;
  s.rho = 0.0;
  s.a.assign(static_cast<std::size_t>(nd) * nd, 0.0);
  for (int e = 0; e < mesh.elems; ++e) {
    const double am = a.eval(Vec(mesh.node(e) + 0.5 * h))(0, 0);
    const int dof[2] = {e - 1, e};
    const double loc[2][2] = {{am / h, -am / h}, {-am / h, am / h}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (dof[i] < 0 || dof[j] < 0 || dof[i] >= nd || dof[j] >= nd) continue;
        s.a[static_cast<std::size_t>(dof[i]) * nd + dof[j]] += loc[i][j];
      }
  }
  s.cert_error = 0.0;
  return s;
}

std::pair<DiscreteFunction, SolverReport> solve_local_fem(
    const MatrixFieldA& a, const Mesh& mesh, const ProblemData& data,
    const SolveOptions& opts) {
  const StiffnessMatrix s = assemble_local_stiffness(a, mesh);
  // the report of the limit problem reuses the same fields; energy here is
  // 2 <Su,u> = 2 int A u' u' and the bound comes out of the loop unchanged
  return outer_truncation_loop(s, data, opts);
}

} // namespace nldiv
