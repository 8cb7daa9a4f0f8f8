#pragma once

// Shared test oracles.  Everything here is an independent reference path:
// closed forms and brute-force quadratures that never touch the assembly or
// form-evaluator code they are used to check.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nldiv/linalg.hpp"
#include "nldiv/mesh.hpp"
#include "nldiv/quadrature.hpp"
#include "nldiv/special.hpp"

namespace nldiv::testing {

// closed-form solution of the linear problem L u = 1 on (-1,1) with the
// homogeneous kernel (fractional torsion), evaluated through the gamma
// reference rather than hardcoded digits
inline double getoor_reference(double s, double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  const double amp = std::pow(2.0, -2.0 * s) * std::sqrt(M_PI) /
                     (gamma_fn(0.5 * (1.0 + 2.0 * s)) * gamma_fn(1.0 + s));
  return amp * std::pow(1.0 - x * x, s);
}

// exact correlation C(tau) = int u(x) u(x - tau) dx of a P1 function with
// zero extension: breakpoints merged, each segment integrated exactly
inline double p1_correlation(const DiscreteFunction& u, double tau) {
  const Mesh& m = u.mesh;
  const double lo = std::max(m.a, m.a + tau);
  const double hi = std::min(m.b, m.b + tau);
  if (hi <= lo) return 0.0;
  std::vector<double> cuts;
  for (int k = 0; k <= m.elems; ++k) {
    const double xk = m.node(k);
    if (xk > lo && xk < hi) cuts.push_back(xk);
    if (xk + tau > lo && xk + tau < hi) cuts.push_back(xk + tau);
  }
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  const GlRule& gl = gl_rule(2); // product of two linears is quadratic
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (b - a < 1e-15) continue;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
      acc += 0.5 * (b - a) * gl.weights[q] * u.eval(x) * u.eval(x - tau);
    }
  }
  return acc;
}

// exact Dirichlet energy of the piecewise-linear function
inline double p1_gradient_energy(const DiscreteFunction& u) {
  const Mesh& m = u.mesh;
  const double h = m.h();
  double acc = 0.0;
  for (int e = 0; e < m.elems; ++e) {
    const double ul = (e - 1 >= 0 && e - 1 < m.dofs()) ? u.coeffs[static_cast<std::size_t>(e - 1)] : 0.0;
    const double ur = (e >= 0 && e < m.dofs()) ? u.coeffs[static_cast<std::size_t>(e)] : 0.0;
    const double slope = (ur - ul) / h;
    acc += h * slope * slope;
  }
  return acc;
}

// brute-force value of iint (u(x)-u(z))^2 K dx dz for the homogeneous
// kernel via the exact correlation: radial reduction with the gradient
// subtraction near zero and the exact L2 tail
inline double homogeneous_energy_oracle(const DiscreteFunction& u, double s,
                                        double rho) {
  const double c = c_ns(1, s);
  const double c0 = p1_correlation(u, 0.0);
  const double qr = p1_gradient_energy(u);
  const double r_c = std::min(1.0, rho);
  // grading stops before the subtracted integrand (an O(r^3) difference of
  // O(1) correlations) drowns in rounding noise
  double acc = qr * frac_power_int(2, s, 0.0, r_c);
  for (const Panel& pn : graded_panels_toward_a(0.0, r_c, 14)) {
    if (pn.a == 0.0) continue;
    acc += gl_integrate(
        [&](double r) {
          return std::pow(r, -1.0 - 2.0 * s) *
                 (2.0 * (c0 - p1_correlation(u, r)) - r * r * qr);
        },
        pn.a, pn.b, 8);
  }
  const double diam = u.mesh.b - u.mesh.a;
  const double far_end = std::min(rho, diam);
  if (far_end > r_c)
    for (const Panel& pn : geometric_panels(r_c, far_end, 1.5))
      acc += gl_integrate(
          [&](double r) {
            return std::pow(r, -1.0 - 2.0 * s) *
                   (2.0 * (c0 - p1_correlation(u, r)));
          },
          pn.a, pn.b, 8);
  if (rho > diam) {
    // supports of u and its translate are disjoint beyond the diameter
    if (std::isinf(rho)) {
      acc += 2.0 * c0 * std::pow(diam, -2.0 * s) / (2.0 * s);
    } else {
      acc += 2.0 * c0 *
             (std::pow(diam, -2.0 * s) - std::pow(rho, -2.0 * s)) / (2.0 * s);
    }
  }
  // both spatial directions contribute equally
  return 2.0 * c * acc;
}

inline SymMat random_spd(int n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ev(lo, hi);
  std::uniform_real_distribution<double> ar(0.0, 2.0 * M_PI);
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = ev(rng);
  const Mat o = n == 1 ? Mat::identity(1)
                       : (n == 2 ? rotation2(ar(rng))
                                 : rotation3(ar(rng), ar(rng), ar(rng)));
  return SymMat::from(o.mul(SymMat::diag(d).full()).mul(o.transposed()));
}

} // namespace nldiv::testing
