#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "nldiv/mesh.hpp"

// The semilinear zero-order term and the L1-dominated data it acts on:
// catalogue nonlinearities h (continuous, odd, strictly increasing), the
// cutoff G_k used by the truncation scheme, and the data truncation
// f_j = f/(1+|f|/j), a_j = a/(1+Q a/j).

namespace nldiv {

struct Nonlinearity {
  std::string name;
  double gamma = 0.0; // lim_{t->inf} h(t), +inf for unbounded h
  std::function<double(double)> h;
  std::function<double(double)> dh;        // h'; central differences when unset
  std::function<double(double)> h_inverse; // on (-gamma, gamma)
  std::function<double(double)> primitive; // H(t) = int_0^t h

  double slope(double t) const {
    if (dh) return dh(t);
    const double d = 1e-6 * (1.0 + std::abs(t));
    return (h(t + d) - h(t - d)) / (2.0 * d);
  }
};

// identity h(t)=t (gamma=inf), cubic h(t)=t^3 (gamma=inf),
// atan h(t)=arctan t (gamma=pi/2).
Nonlinearity nl_identity();
Nonlinearity nl_cubic();
Nonlinearity nl_atan();
Nonlinearity nl_by_name(const std::string& name);

// G_k(t): 0 on [-k,k], t-k above, t+k below.
double cutoff_G(double t, double k);

struct ProblemData {
  std::vector<double> a; // interior nodal samples, a >= 0
  std::vector<double> f; // interior nodal samples, |f| <= Q a
  double a_bnd[2] = {0.0, 0.0}; // boundary samples, used by the L1 rule
  double f_bnd[2] = {0.0, 0.0};
  double Q = 0.0;
  Nonlinearity nl;
  bool linear_mode = false; // waives the domination check (a == 0 allowed)
};

// Samples the densities at the interior nodes and validates the domination
// condition (unless linear_mode).  Throws std::invalid_argument listing the
// first offending node.
ProblemData make_problem_data(const Mesh& mesh,
                              const std::function<double(double)>& a_fn,
                              const std::function<double(double)>& f_fn,
                              double q, Nonlinearity nl,
                              bool linear_mode = false);

struct TruncatedData {
  std::vector<double> f_j;
  std::vector<double> a_j;
};

// f_j = f/(1+|f|/j), a_j = a/(1+Q a/j); preserves |f_j| <= Q a_j and gives
// ||f_j||_inf <= j, ||a_j||_inf <= j/Q.
TruncatedData truncate_data(const ProblemData& data, int j);

// trapezoid quadrature of |g| over the domain (interior nodes plus the two
// boundary half-cells); exact for constants
double l1_norm(const Mesh& mesh, const std::vector<double>& g, double g_left,
               double g_right);
double l1_norm(const Mesh& mesh, const std::vector<double>& g);

} // namespace nldiv
