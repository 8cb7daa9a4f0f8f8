#include "nldiv/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace nldiv {

Nonlinearity nl_identity() {
  Nonlinearity nl;
  nl.name = "identity";
  nl.gamma = std::numeric_limits<double>::infinity();
  nl.h = [](double t) { return t; };
  nl.dh = [](double) { return 1.0; };
  nl.h_inverse = [](double t) { return t; };
  nl.primitive = [](double t) { return 0.5 * t * t; };
  return nl;
}

Nonlinearity nl_cubic() {
  Nonlinearity nl;
  nl.name = "cubic";
  nl.gamma = std::numeric_limits<double>::infinity();
  nl.h = [](double t) { return t * t * t; };
  nl.dh = [](double t) { return 3.0 * t * t; };
  nl.h_inverse = [](double t) { return std::cbrt(t); };
  nl.primitive = [](double t) { return 0.25 * t * t * t * t; };
  return nl;
}

Nonlinearity nl_atan() {
  Nonlinearity nl;
  nl.name = "atan";
  nl.gamma = 0.5 * M_PI;
  nl.h = [](double t) { return std::atan(t); };
  nl.dh = [](double t) { return 1.0 / (1.0 + t * t); };
  nl.h_inverse = [](double t) { return std::tan(t); };
  // int_0^t arctan = t arctan t - log(1+t^2)/2, nonnegative
  nl.primitive = [](double t) {
    return t * std::atan(t) - 0.5 * std::log1p(t * t);
  };
  return nl;
}

Nonlinearity nl_by_name(const std::string& name) {
  if (name == "identity") return nl_identity();
  if (name == "cubic") return nl_cubic();
  if (name == "atan") return nl_atan();
  throw std::invalid_argument("unknown nonlinearity: " + name);
}

double cutoff_G(double t, double k) {
  if (k < 0.0) throw std::domain_error("cutoff_G: k must be nonnegative");
  if (t > k) return t - k;
  if (t < -k) return t + k;
  return 0.0;
}

ProblemData make_problem_data(const Mesh& mesh,
                              const std::function<double(double)>& a_fn,
                              const std::function<double(double)>& f_fn,
                              double q, Nonlinearity nl, bool linear_mode) {
  ProblemData d;
  d.Q = q;
  d.nl = nl;
  d.linear_mode = linear_mode;
  const int m = mesh.dofs();
  d.a.resize(static_cast<std::size_t>(m));
  d.f.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double x = mesh.dof_x(k);
    d.a[static_cast<std::size_t>(k)] = a_fn(x);
    d.f[static_cast<std::size_t>(k)] = f_fn(x);
    if (d.a[static_cast<std::size_t>(k)] < 0.0)
      throw std::invalid_argument("problem data: a must be nonnegative (node " +
                                  std::to_string(k) + ")");
  }
  d.a_bnd[0] = a_fn(mesh.a);
  d.a_bnd[1] = a_fn(mesh.b);
  d.f_bnd[0] = f_fn(mesh.a);
  d.f_bnd[1] = f_fn(mesh.b);
  if (!linear_mode) {
    if (!(q > 0.0 && q < nl.gamma))
      throw std::invalid_argument("problem data: Q must lie in (0, gamma)");
    for (int k = 0; k < m; ++k)
      if (std::abs(d.f[static_cast<std::size_t>(k)]) >
          q * d.a[static_cast<std::size_t>(k)] + 1e-14)
        throw std::invalid_argument(
            "problem data: domination |f| <= Q a fails at node " +
            std::to_string(k));
    for (int k = 0; k < 2; ++k)
      if (std::abs(d.f_bnd[k]) > q * d.a_bnd[k] + 1e-14)
        throw std::invalid_argument(
            "problem data: domination |f| <= Q a fails at the boundary");
  }
  return d;
}

TruncatedData truncate_data(const ProblemData& data, int j) {
  if (j < 1) throw std::invalid_argument("truncate_data: j must be >= 1");
  TruncatedData t;
  t.f_j.resize(data.f.size());
  t.a_j.resize(data.a.size());
  for (std::size_t k = 0; k < data.f.size(); ++k) {
    t.f_j[k] = data.f[k] / (1.0 + std::abs(data.f[k]) / j);
    t.a_j[k] = data.a[k] / (1.0 + data.Q * data.a[k] / j);
  }
  return t;
}

double l1_norm(const Mesh& mesh, const std::vector<double>& g, double g_left,
               double g_right) {
  double acc = 0.5 * (std::abs(g_left) + std::abs(g_right));
  for (double v : g) acc += std::abs(v);
  return acc * mesh.h();
}

double l1_norm(const Mesh& mesh, const std::vector<double>& g) {
  return l1_norm(mesh, g, 0.0, 0.0);
}

} // namespace nldiv
