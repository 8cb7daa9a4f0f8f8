#pragma once

#include <utility>
#include <vector>

// Gauss-Legendre rules and graded panel layouts shared by the quadrature
// code paths.

namespace nldiv {

struct GlRule {
  std::vector<double> nodes;   // on [-1,1]
  std::vector<double> weights; // sum to 2
};

// Nodes by Newton iteration on the Legendre recurrence; cached per order.
const GlRule& gl_rule(int q);

template <class F>
double gl_integrate(F&& f, double a, double b, int q) {
  const GlRule& r = gl_rule(q);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    acc += r.weights[i] * f(mid + half * r.nodes[i]);
  return acc * half;
}

struct Panel {
  double a = 0.0;
  double b = 0.0;
};

// Geometric subdivision of [a,b] accumulating toward `a`:
// breakpoints a + (b-a)*ratio^k for k = levels..0.
std::vector<Panel> graded_panels_toward_a(double a, double b, int levels,
                                          double ratio = 0.5);

// Geometric growth from a to b: [a, a*grow, a*grow^2, ...] capped at b.
// Requires 0 < a < b.
std::vector<Panel> geometric_panels(double a, double b, double grow = 2.0);

// Exact int_{t0}^{t1} t^{k-1-2s} dt with the logarithmic branch at k = 2s.
double frac_power_int(int k, double s, double t0, double t1);

} // namespace nldiv
