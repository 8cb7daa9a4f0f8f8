#include "nldiv/correspondence.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nldiv/quadrature.hpp"
#include "nldiv/simd/simd.hpp"
#include "nldiv/special.hpp"

namespace nldiv {

SphereRule sphere_rule(int n, int level) {
  if (level < 1) throw std::domain_error("sphere_rule: level must be >= 1");
  SphereRule rule;
  rule.n = n;
  if (n == 1) {
    rule.nodes = {Vec(-1.0), Vec(1.0)};
    rule.weights = {1.0, 1.0};
  } else if (n == 2) {
    const int m = 64 << level;
    const double w = 2.0 * M_PI / m;
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * M_PI * k / m;
      rule.nodes.push_back(Vec(std::cos(t), std::sin(t)));
      rule.weights.push_back(w);
    }
  } else if (n == 3) {
    const int q = 8 << level;
    const int m = 16 << level;
    const GlRule& gl = gl_rule(q);
    const double wphi = 2.0 * M_PI / m;
    for (int i = 0; i < q; ++i) {
      const double mu = gl.nodes[static_cast<std::size_t>(i)]; // cos(theta)
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      for (int k = 0; k < m; ++k) {
        const double phi = 2.0 * M_PI * k / m;
        rule.nodes.push_back(Vec(st * std::cos(phi), st * std::sin(phi), mu));
        rule.weights.push_back(gl.weights[static_cast<std::size_t>(i)] * wphi);
      }
    }
  } else {
    throw std::domain_error("sphere_rule: dimension must be 1, 2 or 3");
  }
  return rule;
}

std::vector<double> sigma_from_lambda(const std::vector<double>& lambda) {
  const int n = static_cast<int>(lambda.size());
  double bar = 1.0;
  for (double l : lambda) {
    if (!(l > 0.0))
      throw std::domain_error("sigma_from_lambda: eigenvalues must be positive");
    bar *= l;
  }
  const double root = std::pow(bar, 1.0 / (n + 2));
  std::vector<double> sigma(lambda.size());
  for (std::size_t i = 0; i < lambda.size(); ++i)
    sigma[i] = std::sqrt(root / lambda[i]);
  return sigma;
}

double hyperellipsoid_integral(const std::vector<double>& sigma, int i) {
  const int n = static_cast<int>(sigma.size());
  double prod = 1.0;
  for (double s : sigma) {
    if (!(s > 0.0))
      throw std::domain_error("hyperellipsoid_integral: sigma must be positive");
    prod *= s;
  }
  const double ve = std::pow(M_PI, 0.5 * n) / (gamma_fn(0.5 * (n + 2)) * prod);
  return ve / (sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(i)]);
}

SymMat build_N(const SymMat& a) {
  const Spectrum sp = eigh_sym(a);
  std::vector<double> lambda(static_cast<std::size_t>(a.n));
  for (int i = 0; i < a.n; ++i) {
    if (!(sp.lambda[i] > 0.0))
      throw std::domain_error("build_N: matrix must be positive definite");
    lambda[static_cast<std::size_t>(i)] = sp.lambda[i];
  }
  const std::vector<double> sigma = sigma_from_lambda(lambda);
  Vec d(a.n);
  for (int i = 0; i < a.n; ++i) d[i] = sigma[static_cast<std::size_t>(i)];
  const Mat res =
      sp.vectors.mul(SymMat::diag(d).full()).mul(sp.vectors.transposed());
  return SymMat::from(res);
}

SymMat recover_A(const SymMat& n_mat, const SphereRule& rule) {
  const int n = n_mat.n;
  if (rule.n != n) throw std::invalid_argument("recover_A: rule dimension mismatch");
  {
    const Spectrum sp = eigh_sym(n_mat);
    if (!(std::abs(sp.lambda[0]) > 1e-14 && std::abs(sp.lambda[n - 1]) > 1e-14))
      throw std::domain_error("recover_A: singular N");
  }
  const std::size_t m = rule.nodes.size();
  std::vector<double> norms(m), wpow(m);
  for (std::size_t q = 0; q < m; ++q) norms[q] = n_mat.apply(rule.nodes[q]).norm();
  simd::pow_neg(norms.data(), m, static_cast<double>(n + 2), wpow.data());
  for (std::size_t q = 0; q < m; ++q) wpow[q] *= rule.weights[q];

  const double scale = n / sphere_measure(n);
  SymMat a(n);
  std::vector<double> pi(m), pj(m);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (std::size_t q = 0; q < m; ++q) {
        pi[q] = rule.nodes[q][i];
        pj[q] = rule.nodes[q][j];
      }
      a.set(i, j, scale * simd::dot3(pi.data(), pj.data(), wpow.data(), m));
    }
  return a;
}

MatrixFieldM build_M_field(const MatrixFieldA& a, const HPerturbation& h) {
  if (!(a.lambda_lo > 0.0 && a.lambda_hi >= a.lambda_lo))
    throw std::domain_error("build_M_field: field must carry positive eigenvalue bounds");
  const int n = a.n;
  MatrixFieldM m;
  m.n = n;

  // sigma bounds implied by the eigenvalue box of A; M symmetric, so the
  // quadratic-form range doubles as the |M xi| range
  const double exp_num = 0.5 * n / (n + 2);
  const double sig_lo = std::pow(a.lambda_lo, exp_num) / std::sqrt(a.lambda_hi);
  const double sig_hi = std::pow(a.lambda_hi, exp_num) / std::sqrt(a.lambda_lo);
  m.beta = sig_lo;
  m.alpha = sig_hi + h.bound;

  const auto a_eval = a.eval;
  const auto h_eval = h.eval;
  m.eval = [a_eval, h_eval](const Vec& x, const Vec& y) {
    const SymMat nx = build_N(a_eval(x));
    const SymMat nxy = build_N(a_eval(x + y));
    return ((nx + nxy) * 0.5 + h_eval(y)).full();
  };
  // along each ray, A(x - t psi + t psi) settles only if A does; expose the
  // ray limit through frozen evaluation at large t
  m.m_infty = [a_eval, h_eval](const Vec& x, const Vec& psi) {
    const double t = 1e8;
    const SymMat nx = build_N(a_eval(x - psi * t));
    const SymMat nxy = build_N(a_eval(x));
    return ((nx + nxy) * 0.5 + h_eval(psi * t)).full();
  };
  if (a.lipschitz && *a.lipschitz == 0.0 && h.bound == 0.0) {
    const SymMat n0 = build_N(a_eval(Vec(n)));
    m.constant_value = n0.full();
    m.lipschitz = 0.0;
  }
  return m;
}

MatrixFieldM build_M_field(const MatrixFieldA& a) {
  return build_M_field(a, HPerturbation::zero(a.n));
}

StructuralReport check_structural(const MatrixFieldM& m,
                                  const std::vector<StructuralSample>& samples) {
  StructuralReport rep;
  for (const StructuralSample& s : samples) {
    const Mat left = m.eval(s.x - s.y, s.y);
    const Mat right = m.eval(s.x, -s.y);
    rep.max_structural_violation =
        std::max(rep.max_structural_violation, operator_norm(left - right));
    const double nx = s.xi.norm();
    if (nx > 0.0) {
      const double r = left.apply(s.xi).norm() / nx;
      rep.max_bound_violation = std::max(
          rep.max_bound_violation, std::max(m.beta - r, r - m.alpha));
    }
  }
  rep.max_bound_violation = std::max(rep.max_bound_violation, 0.0);
  return rep;
}

double estimate_M_lipschitz(const MatrixFieldM& m, double box_radius,
                            int samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-box_radius, box_radius);
  double best = 0.0;
  for (int k = 0; k < samples; ++k) {
    Vec x1(m.n), y1(m.n), x2(m.n), y2(m.n);
    for (int i = 0; i < m.n; ++i) {
      x1[i] = u(rng);
      y1[i] = u(rng);
      x2[i] = u(rng);
      y2[i] = u(rng);
    }
    const double dist = std::sqrt((x1 - x2).dot(x1 - x2) + (y1 - y2).dot(y1 - y2));
    if (dist < 1e-12) continue;
    const double diff = operator_norm(m.eval(x1, y1) - m.eval(x2, y2));
    best = std::max(best, diff / dist);
  }
  return best;
}

} // namespace nldiv
