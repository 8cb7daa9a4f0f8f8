#include "nldiv/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace nldiv {

namespace {

GlRule make_gl(int q) {
  GlRule r;
  r.nodes.resize(static_cast<std::size_t>(q));
  r.weights.resize(static_cast<std::size_t>(q));
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.nodes[static_cast<std::size_t>(q - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(q - 1 - i)] = w;
  }
  return r;
}

std::map<int, GlRule> g_cache;
std::mutex g_cache_mutex;

} // namespace

const GlRule& gl_rule(int q) {
  if (q < 1) throw std::invalid_argument("gl_rule: order must be positive");
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto it = g_cache.find(q);
  if (it == g_cache.end()) it = g_cache.emplace(q, make_gl(q)).first;
  return it->second;
}

std::vector<Panel> graded_panels_toward_a(double a, double b, int levels,
                                          double ratio) {
  std::vector<Panel> out;
  const double len = b - a;
  double hi = 1.0;
  for (int k = 0; k < levels; ++k) {
    const double lo = hi * ratio;
    out.push_back({a + len * lo, a + len * hi});
    hi = lo;
  }
  out.push_back({a, a + len * hi});
  return out;
}

std::vector<Panel> geometric_panels(double a, double b, double grow) {
  if (!(a > 0.0 && b > a))
    throw std::invalid_argument("geometric_panels: need 0 < a < b");
  std::vector<Panel> out;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, lo * grow);
    out.push_back({lo, hi});
    lo = hi;
  }
  return out;
}

double frac_power_int(int k, double s, double t0, double t1) {
  const double e = k - 2.0 * s;
  if (std::abs(e) > 1e-9) {
    const double hi = std::pow(t1, e);
    const double lo = t0 > 0.0 ? std::pow(t0, e) : 0.0;
    return (hi - lo) / e;
  }
  // expansion around the logarithmic case
  const double l1 = std::log(t1), l0 = std::log(t0);
  return (l1 - l0) + 0.5 * e * (l1 * l1 - l0 * l0);
}

} // namespace nldiv
