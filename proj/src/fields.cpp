#include "nldiv/fields.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

#include "nldiv/quadrature.hpp"

namespace nldiv {

HPerturbation HPerturbation::zero(int n) {
  HPerturbation h;
  h.eval = [n](const Vec&) { return SymMat(n); };
  h.bound = 0.0;
  return h;
}

MatrixFieldM MatrixFieldM::constant(const Mat& m) {
  MatrixFieldM f;
  f.n = m.n;
  f.eval = [m](const Vec&, const Vec&) { return m; };
  f.m_infty = [m](const Vec&, const Vec&) { return m; };
  f.constant_value = m;
  f.lipschitz = 0.0;
  // singular-value range of the constant matrix gives the |M xi| bounds
  const Spectrum sp = eigh_sym(SymMat::from(m.transposed().mul(m)));
  f.beta = std::sqrt(std::max(0.0, sp.lambda[0]));
  f.alpha = std::sqrt(std::max(0.0, sp.lambda[m.n - 1]));
  return f;
}

MatrixFieldM MatrixFieldM::identity(int n) {
  return constant(Mat::identity(n));
}

MatrixFieldA field_identity(int n) {
  MatrixFieldA f;
  f.n = n;
  f.lambda_lo = 1.0;
  f.lambda_hi = 1.0;
  f.eval = [n](const Vec&) { return SymMat::identity(n); };
  f.lipschitz = 0.0;
  return f;
}

MatrixFieldA field_constant(int n, const SymMat& a) {
  const Spectrum sp = eigh_sym(a);
  if (!(sp.lambda[0] > 0.0))
    throw std::domain_error("field_constant: matrix must be positive definite");
  MatrixFieldA f;
  f.n = n;
  f.lambda_lo = sp.lambda[0];
  f.lambda_hi = sp.lambda[n - 1];
  f.eval = [a](const Vec&) { return a; };
  f.lipschitz = 0.0;
  return f;
}

MatrixFieldA field_anisotropic_diag(int n, const Vec& d) {
  return field_constant(n, SymMat::diag(d));
}

MatrixFieldA field_rotating(int n, const Vec& eigs, double omega) {
  if (n != 2) throw std::domain_error("field_rotating: only n = 2");
  double lo = eigs[0], hi = eigs[0];
  for (int i = 0; i < n; ++i) {
    lo = std::min(lo, eigs[i]);
    hi = std::max(hi, eigs[i]);
  }
  if (!(lo > 0.0)) throw std::domain_error("field_rotating: eigenvalues must be positive");
  MatrixFieldA f;
  f.n = n;
  f.lambda_lo = lo;
  f.lambda_hi = hi;
  f.eval = [eigs, omega](const Vec& x) {
    const Mat o = rotation2(omega * x[0]);
    const Mat a = o.mul(SymMat::diag(eigs).full()).mul(o.transposed());
    return SymMat::from(a);
  };
  // |dA/dx| <= 2*omega*(hi-lo) for a rotating frame
  f.lipschitz = 2.0 * std::abs(omega) * (hi - lo);
  return f;
}

MatrixFieldA field_step(int n, double lo, double hi) {
  if (!(lo > 0.0 && hi > 0.0))
    throw std::domain_error("field_step: levels must be positive");
  MatrixFieldA f;
  f.n = n;
  f.lambda_lo = std::min(lo, hi);
  f.lambda_hi = std::max(lo, hi);
  f.eval = [n, lo, hi](const Vec& x) {
    SymMat a = SymMat::identity(n);
    return a * (x[0] < 0.0 ? lo : hi);
  };
  return f;
}

MatrixFieldA field_by_name(const std::string& name, int n) {
  if (name == "identity") return field_identity(n);
  if (name == "anisotropic-diag") {
    Vec d(n);
    d[0] = 2.0;
    if (n > 1) d[1] = 0.5;
    if (n > 2) d[2] = 1.0;
    return field_anisotropic_diag(n, d);
  }
  if (name == "rotating-field") return field_rotating(2, Vec(2.0, 0.5), 1.0);
  if (name == "step-field") return field_step(n, 1.0, 2.0);
  throw std::domain_error("unknown field name: " + name);
}

MatrixFieldA mollify_A_field(const MatrixFieldA& a, int ell) {
  if (ell < 1) throw std::domain_error("mollify_A_field: ell must be >= 1");
  const double eps = 1.0 / ell;
  const int n = a.n;
  const int q = 12;
  const GlRule& gl = gl_rule(q);

  // tensor bump samples, normalized discretely so constants are exact
  struct Node {
    Vec z;
    double w;
  };
  auto nodes = std::make_shared<std::vector<Node>>();
  const auto bump = [eps](const Vec& z) {
    double r2 = 0.0;
    for (int i = 0; i < z.n; ++i) r2 += z[i] * z[i];
    const double t = 1.0 - r2 / (eps * eps);
    return t > 0.0 ? t * t : 0.0;
  };
  if (n == 1) {
    // composite rule: keeps discontinuous entries resolved to the panel
    // width instead of smearing them across the whole support
    const GlRule& gl4 = gl_rule(4);
    const int panels = 32;
    for (int p = 0; p < panels; ++p) {
      const double a0 = -eps + 2.0 * eps * p / panels;
      const double b0 = -eps + 2.0 * eps * (p + 1) / panels;
      for (std::size_t i = 0; i < gl4.nodes.size(); ++i) {
        Node nd;
        nd.z = Vec(0.5 * (a0 + b0) + 0.5 * (b0 - a0) * gl4.nodes[i]);
        nd.w = 0.5 * (b0 - a0) * gl4.weights[i] * bump(nd.z);
        if (nd.w > 0.0) nodes->push_back(nd);
      }
    }
  } else if (n == 2) {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        Node nd;
        nd.z = Vec(eps * gl.nodes[i], eps * gl.nodes[j]);
        nd.w = gl.weights[i] * gl.weights[j] * bump(nd.z);
        if (nd.w > 0.0) nodes->push_back(nd);
      }
  } else {
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j)
        for (int k = 0; k < q; ++k) {
          Node nd;
          nd.z = Vec(eps * gl.nodes[i], eps * gl.nodes[j], eps * gl.nodes[k]);
          nd.w = gl.weights[i] * gl.weights[j] * gl.weights[k] * bump(nd.z);
          if (nd.w > 0.0) nodes->push_back(nd);
        }
  }
  double wsum = 0.0;
  for (const Node& nd : *nodes) wsum += nd.w;
  for (Node& nd : *nodes) nd.w /= wsum;

  MatrixFieldA out;
  out.n = n;
  out.lambda_lo = a.lambda_lo;
  out.lambda_hi = a.lambda_hi;
  const auto inner = a.eval;
  out.eval = [inner, nodes, n](const Vec& x) {
    SymMat acc(n);
    for (const Node& nd : *nodes) acc = acc + inner(x - nd.z) * nd.w;
    return acc;
  };
  out.lipschitz = a.lipschitz;
  return out;
}

} // namespace nldiv
