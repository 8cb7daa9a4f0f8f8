#include "nldiv/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace nldiv {

Mesh Mesh::interval(double a, double b, int elems) {
  if (!(b > a)) throw std::invalid_argument("Mesh: empty interval");
  if (elems < 2) throw std::invalid_argument("Mesh: need at least two elements");
  Mesh m;
  m.a = a;
  m.b = b;
  m.elems = elems;
  return m;
}

DiscreteFunction DiscreteFunction::zero(const Mesh& m) {
  DiscreteFunction u;
  u.mesh = m;
  u.coeffs.assign(static_cast<std::size_t>(m.dofs()), 0.0);
  return u;
}

double DiscreteFunction::eval(double x) const {
  if (x <= mesh.a || x >= mesh.b) return 0.0;
  const double h = mesh.h();
  const double t = (x - mesh.a) / h;
  int e = static_cast<int>(t);
  if (e >= mesh.elems) e = mesh.elems - 1;
  const double loc = t - e;
  const double ul = (e - 1 >= 0 && e - 1 < mesh.dofs()) ? coeffs[static_cast<std::size_t>(e - 1)] : 0.0;
  const double ur = (e >= 0 && e < mesh.dofs()) ? coeffs[static_cast<std::size_t>(e)] : 0.0;
  return ul * (1.0 - loc) + ur * loc;
}

double DiscreteFunction::linf() const {
  double m = 0.0;
  for (double c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double DiscreteFunction::l2() const {
  // int (sum u_i phi_i)^2 with the exact P1 mass form
  const double h = mesh.h();
  const int n = mesh.dofs();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += coeffs[static_cast<std::size_t>(i)] * coeffs[static_cast<std::size_t>(i)] * (2.0 * h / 3.0);
    if (i + 1 < n)
      acc += 2.0 * coeffs[static_cast<std::size_t>(i)] * coeffs[static_cast<std::size_t>(i + 1)] * (h / 6.0);
  }
  return std::sqrt(std::max(0.0, acc));
}

double l2_distance(const DiscreteFunction& u, const DiscreteFunction& v) {
  DiscreteFunction d = u;
  for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= v.coeffs[i];
  return d.l2();
}

} // namespace nldiv
