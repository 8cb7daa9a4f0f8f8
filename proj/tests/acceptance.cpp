// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with its runtime.  Run through ctest or directly.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "helpers.hpp"
#include "nldiv/asymptotics.hpp"
#include "nldiv/correspondence.hpp"
#include "nldiv/runner.hpp"
#include "nldiv/solver.hpp"
#include "nldiv/special.hpp"

using namespace nldiv;
using namespace nldiv::testing;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Stopwatch {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

void report(const char* name, bool pass, double seconds) {
  std::printf("ACCEPT %-34s %s  (%.2f s)\n", name, pass ? "PASS" : "FAIL",
              seconds);
  std::fflush(stdout);
  CHECK(pass);
}

} // namespace

TEST_CASE("criterion 1: constant limits") {
  Stopwatch w;
  bool pass = true;
  for (int n = 1; n <= 3; ++n) {
    const double om = sphere_measure(n);
    pass = pass && std::abs(c_ns(n, 1e-4) / 1e-4 - 2.0 / om) <= 1e-3;
    pass = pass && std::abs(c_ns(n, 1.0 - 1e-4) / 1e-4 - 4.0 * n / om) <= 1e-3;
  }
  report("1 constant limits", pass, w.seconds());
}

TEST_CASE("criterion 2: hyperellipsoid integrals vs dense quadrature") {
  Stopwatch w;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> sr(0.5, 2.0);
  bool pass = true;
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + rep % 2;
    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (double& v : sigma) v = sr(rng);
    const SphereRule rule = sphere_rule(n, 5);
    for (int i = 0; i < n; ++i) {
      double quad = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        double denom = 0.0;
        for (int d = 0; d < n; ++d)
          denom += sigma[static_cast<std::size_t>(d)] *
                   sigma[static_cast<std::size_t>(d)] * rule.nodes[q][d] *
                   rule.nodes[q][d];
        quad += rule.weights[q] * rule.nodes[q][i] * rule.nodes[q][i] *
                std::pow(denom, -0.5 * (n + 2));
      }
      const double exact = hyperellipsoid_integral(sigma, i);
      pass = pass && std::abs(quad - exact) <= 1e-8 * exact;
    }
  }
  report("2 hyperellipsoid oracle", pass, w.seconds());
}

TEST_CASE("criterion 3: spectral round trip") {
  Stopwatch w;
  std::mt19937_64 rng(1003);
  bool pass = true;
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 2;
    const SymMat a = random_spd(n, rng, 0.5, 2.0);
    const SymMat back = recover_A(build_N(a), sphere_rule(n, 3));
    worst = std::max(worst, operator_norm(back - a));
  }
  pass = worst <= 1e-6;
  report("3 A<->N round trip", pass, w.seconds());
}

TEST_CASE("criteria 4+5: solve batch bounds and uniqueness") {
  Stopwatch w;
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  bool pass_bounds = true, pass_unique = true;

  const double s_grid[3] = {0.3, 0.5, 0.7};
  const Mesh mesh = Mesh::interval(-1.0, 1.0, 128);

  for (int inst = 0; inst < 25; ++inst) {
    const double s = s_grid[inst % 3];
    Nonlinearity nl = inst % 3 == 0 ? nl_identity()
                                    : (inst % 3 == 1 ? nl_cubic() : nl_atan());
    const double q_cap = std::isinf(nl.gamma) ? 1.2 : 0.8 * nl.gamma;
    const double q = 0.1 + 0.8 * q_cap * ur(rng);

    const double a0 = 0.2 + 2.0 * ur(rng);
    const double a1 = 2.0 * ur(rng);
    const double kf = 1.0 + 6.0 * ur(rng);
    const double th = 2.0 * ur(rng) - 1.0;
    auto a_fn = [a0, a1, kf](double x) {
      return a0 + a1 * std::abs(std::sin(kf * x));
    };
    auto f_fn = [a_fn, q, th, kf](double x) {
      return q * a_fn(x) * th * std::cos(0.5 * kf * x);
    };
    const ProblemData data = make_problem_data(mesh, a_fn, f_fn, q, nl);

    MatrixFieldM m = inst % 2 == 0 ? MatrixFieldM::identity(1)
                                   : build_M_field(field_step(1, 1.0, 2.0));
    const double rho = inst % 4 == 3 ? 1.0 : kInf;
    const KernelSpec k = make_kernel(m, rho, s);
    auto [u, rep] = solve_semilinear(k, mesh, data);

    const double slack_inf = 1e-6 + 0.05 * rep.bound_inf;
    const double slack_en = 1e-6 + 0.05 * rep.bound_energy;
    pass_bounds = pass_bounds && rep.norm_inf <= rep.bound_inf + slack_inf;
    pass_bounds = pass_bounds && rep.energy <= rep.bound_energy + slack_en;

    SolveOptions jittered;
    jittered.initial.assign(static_cast<std::size_t>(mesh.dofs()), 0.0);
    for (double& c : jittered.initial) c = 0.2 * (2.0 * ur(rng) - 1.0);
    auto [u2, rep2] = solve_semilinear(k, mesh, data, jittered);
    pass_unique = pass_unique && l2_distance(u, u2) <= 1e-8;
  }
  report("4 solve batch a-priori bounds", pass_bounds, w.seconds());
  report("5 uniqueness under restarts", pass_unique, w.seconds());
}

TEST_CASE("criterion 6: linear benchmark against the closed form") {
  Stopwatch w;
  bool pass = true;
  double err_256_half = 1.0;
  for (double s : {0.25, 0.5, 0.75}) {
    double prev = 1e300;
    for (int n : {32, 64, 128, 256}) {
      const Mesh mesh = Mesh::interval(-1.0, 1.0, n);
      const ProblemData data = make_problem_data(
          mesh, [](double) { return 0.0; }, [](double) { return 1.0; }, 0.5,
          nl_identity(), true);
      const KernelSpec k = make_kernel(MatrixFieldM::identity(1), kInf, s);
      auto [u, rep] = solve_semilinear(k, mesh, data);
      auto diff2 = [&](double x) {
        const double dd = u.eval(x) - getoor_reference(s, x);
        return dd * dd;
      };
      double err2 = 0.0;
      for (const Panel& pn : graded_panels_toward_a(0.0, 1.0, 20)) {
        err2 += gl_integrate(diff2, pn.a - 1.0, pn.b - 1.0, 6);
        err2 += gl_integrate(diff2, 1.0 - pn.b, 1.0 - pn.a, 6);
      }
      const double err = std::sqrt(err2);
      pass = pass && err < prev;
      prev = err;
      if (n == 256 && s == 0.5) err_256_half = err;
    }
  }
  pass = pass && err_256_half <= 2e-2;
  report("6 Getoor linear benchmark", pass, w.seconds());
}

TEST_CASE("criterion 7: form limit s -> 1") {
  Stopwatch w;
  const std::vector<double> grid = {0.7, 0.8, 0.9, 0.95, 0.99};
  bool pass = true;

  auto check_rep = [&](const FormLimitReport& rep) {
    pass = pass && rep.rows.back().rel_err <= 0.02;
    pass = pass && rep.rows.back().abs_err < rep.rows.front().abs_err;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
      pass = pass && rep.rows[i + 1].abs_err <= rep.rows[i].abs_err + 1e-6;
  };

  const SmoothProbe g1 = probe_gaussian(1);
  check_rep(form_limit_s1(g1, g1, MatrixFieldM::identity(1), kInf, grid));

  const Mat o = rotation2(M_PI / 6.0);
  const SymMat aniso =
      SymMat::from(o.mul(SymMat::diag(Vec(0.5, 2.0)).full()).mul(o.transposed()));
  const MatrixFieldM m2 = build_M_field(field_constant(2, aniso));
  const SmoothProbe g2 = probe_gaussian(2);
  check_rep(form_limit_s1(g2, g2, m2, kInf, grid));

  report("7 form limit s->1", pass, w.seconds());
}

TEST_CASE("criterion 8: form limit s -> 0") {
  Stopwatch w;
  const std::vector<double> grid = {0.2, 0.1, 0.05, 0.01};
  bool pass = true;
  const SmoothProbe g = probe_gaussian(1);
  {
    const FormLimitReport rep =
        form_limit_s0(g, g, MatrixFieldM::identity(1), kInf, grid);
    pass = pass && rep.rows.back().rel_err <= 0.02;
  }
  {
    const FormLimitReport rep =
        form_limit_s0(g, g, MatrixFieldM::identity(1), 0.05, grid);
    pass = pass &&
           std::abs(rep.rows.back().value) <= 0.02 * std::abs(rep.rows.front().value);
  }
  report("8 form limit s->0", pass, w.seconds());
}

TEST_CASE("criterion 9: solution sweep toward the local limit") {
  Stopwatch w;
  const Mesh mesh = Mesh::interval(-1.0, 1.0, 128);
  const ProblemData data = make_problem_data(
      mesh, [](double) { return 1.0; }, [](double) { return 0.4; }, 0.4,
      nl_identity());
  const SweepReport rep =
      sweep_s(field_identity(1), mesh, data, {0.6, 0.75, 0.9, 0.95}, kInf);
  bool pass = true;
  double errloc = 0.0;
  for (int i = 0; i < mesh.dofs(); ++i) {
    const double x = mesh.dof_x(i);
    errloc = std::max(errloc,
                      std::abs(rep.u_local.coeffs[static_cast<std::size_t>(i)] -
                               0.4 * (1.0 - std::cosh(x) / std::cosh(1.0))));
  }
  pass = pass && errloc <= 1e-3;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
    pass = pass && rep.rows[i + 1].dist_l2 < rep.rows[i].dist_l2;
  for (const SweepRow& row : rep.rows) {
    pass = pass && row.report.norm_inf <=
                       row.report.bound_inf + 1e-6 + 0.05 * row.report.bound_inf;
    pass = pass && row.report.energy <= row.report.bound_energy + 1e-6 +
                                            0.05 * row.report.bound_energy;
  }
  report("9 sweep to the local limit", pass, w.seconds());
}

TEST_CASE("criterion 10: property suites") {
  Stopwatch w;
  bool pass = true;
  std::mt19937_64 rng(1010);

  { // cutoff identities, 1e5 pairs
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    std::uniform_real_distribution<double> kr(0.0, 10.0);
    for (int i = 0; i < 100000 && pass; ++i) {
      const double t = u(rng), r = u(rng), c = kr(rng);
      const double gt = cutoff_G(t, c), gr = cutoff_G(r, c);
      pass = pass && t * gt == std::abs(t) * std::abs(gt);
      pass = pass && std::abs(gt - gr) <=
                         std::abs(t - r) + 1e-13 * (1.0 + std::abs(t) + std::abs(r));
      if (t >= r) pass = pass && gt >= gr;
    }
  }
  { // truncation identities, 1e4 samples across j
    std::uniform_real_distribution<double> av(0.0, 10.0);
    const Mesh mesh = Mesh::interval(-1.0, 1.0, 16);
    ProblemData d;
    d.Q = 0.5;
    d.nl = nl_identity();
    d.a.resize(static_cast<std::size_t>(mesh.dofs()));
    d.f.resize(static_cast<std::size_t>(mesh.dofs()));
    for (int rep = 0; rep < 700 && pass; ++rep) {
      for (std::size_t i = 0; i < d.a.size(); ++i) {
        d.a[i] = av(rng);
        std::uniform_real_distribution<double> fv(-0.5 * d.a[i], 0.5 * d.a[i]);
        d.f[i] = fv(rng);
      }
      for (int j = 1; j <= 16; j *= 4) {
        const TruncatedData td = truncate_data(d, j);
        for (std::size_t i = 0; i < td.f_j.size(); ++i) {
          pass = pass && std::abs(td.f_j[i]) <= j + 1e-12;
          pass = pass && td.a_j[i] <= j / d.Q + 1e-12;
          pass = pass && std::abs(td.f_j[i]) <= d.Q * td.a_j[i] + 1e-14;
        }
      }
    }
  }
  { // eigenvalue Lipschitz bound, 500 matrices
    std::uniform_real_distribution<double> e(-2.0, 2.0);
    for (int k = 0; k < 500 && pass; ++k) {
      const int n = 2 + static_cast<int>(rng() % 2);
      SymMat a(n), p(n);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          a.set(i, j, e(rng));
          p.set(i, j, 0.15 * e(rng));
        }
      const EigGapReport rep = eigenvalue_lipschitz_gap(a, a + p);
      pass = pass && rep.max_eigenvalue_gap <= rep.norm_gap + 1e-10;
    }
  }
  { // kernel bounds and symmetry, 1e4 pairs
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const MatrixFieldM m = build_M_field(field_rotating(2, Vec(0.5, 2.0), 1.0));
    const KernelSpec k = make_kernel(m, 1.5, 0.6);
    std::vector<std::pair<Vec, Vec>> pairs;
    for (int i = 0; i < 10000; ++i)
      pairs.emplace_back(Vec(u(rng), u(rng)), Vec(u(rng), u(rng)));
    const KernelBoundsReport rep = kernel_bounds_check(k, pairs);
    pass = pass && rep.max_bound_violation <= 1e-12;
    pass = pass && rep.max_symmetry_violation <= 1e-12;

    std::vector<StructuralSample> samples;
    for (int i = 0; i < 2000; ++i)
      samples.push_back(
          {Vec(u(rng), u(rng)), Vec(u(rng), u(rng)), Vec(u(rng), u(rng))});
    const StructuralReport srep = check_structural(m, samples);
    pass = pass && srep.max_structural_violation <= 1e-10;
    pass = pass && srep.max_bound_violation <= 1e-10;
  }
  { // gradient of J by central differences
    const Mesh mesh = Mesh::interval(-1.0, 1.0, 32);
    const KernelSpec k = make_kernel(MatrixFieldM::identity(1), kInf, 0.5);
    const StiffnessMatrix s = assemble_stiffness(k, mesh);
    const ProblemData d = make_problem_data(
        mesh, [](double) { return 1.0; }, [](double x) { return 0.3 * std::sin(x); },
        0.4, nl_atan());
    std::uniform_real_distribution<double> ur(-0.5, 0.5);
    std::vector<double> u(static_cast<std::size_t>(s.nd));
    for (double& c : u) c = ur(rng);
    const std::vector<double> g = grad_J(u, s, d.a, d.f, d.nl);
    for (int i = 0; i < s.nd; ++i) {
      std::vector<double> up = u, um = u;
      up[static_cast<std::size_t>(i)] += 1e-6;
      um[static_cast<std::size_t>(i)] -= 1e-6;
      const double fd = (energy_J(up, s, d.a, d.f, d.nl) -
                         energy_J(um, s, d.a, d.f, d.nl)) / 2e-6;
      pass = pass && std::abs(fd - g[static_cast<std::size_t>(i)]) <=
                         1e-6 * (1.0 + std::abs(g[static_cast<std::size_t>(i)]));
    }
  }
  report("10 property suites", pass, w.seconds());
}

TEST_CASE("criterion 11: deterministic verify output") {
  Stopwatch w;
  ExperimentConfig cfg = default_config("verify");
  cfg.deterministic = true;
  cfg.seed = 7;
  finalize_config(cfg);
  const RunResult a = run_experiment(cfg);
  const RunResult b = run_experiment(cfg);
  const bool pass = a.exit_code == 0 && b.exit_code == 0 && a.csv == b.csv;
  report("11 byte-identical verify", pass, w.seconds());
}
