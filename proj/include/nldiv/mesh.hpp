#pragma once

#include <vector>

// Uniform P1 mesh of an interval with homogeneous exterior condition:
// discrete functions are hat-function combinations over the interior nodes
// and extend by zero to the rest of the line.

namespace nldiv {

struct Mesh {
  double a = -1.0;
  double b = 1.0;
  int elems = 0;

  static Mesh interval(double a, double b, int elems);

  double h() const { return (b - a) / elems; }
  double diameter() const { return b - a; }
  int dofs() const { return elems - 1; }
  double node(int i) const { return a + h() * i; }  // i = 0..elems
  double dof_x(int k) const { return node(k + 1); } // interior node of dof k
};

struct DiscreteFunction {
  Mesh mesh;
  std::vector<double> coeffs; // one per interior node

  static DiscreteFunction zero(const Mesh& m);
  template <class F>
  static DiscreteFunction interpolate(const Mesh& m, F&& f) {
    DiscreteFunction u = zero(m);
    for (int k = 0; k < m.dofs(); ++k) u.coeffs[static_cast<std::size_t>(k)] = f(m.dof_x(k));
    return u;
  }

  // piecewise-linear value; zero outside (a,b)
  double eval(double x) const;

  double linf() const;
  // exact L2 norm of the P1 function (tridiagonal mass form)
  double l2() const;
};

// exact L2 norm of the difference of two functions on the same mesh
double l2_distance(const DiscreteFunction& u, const DiscreteFunction& v);

} // namespace nldiv
