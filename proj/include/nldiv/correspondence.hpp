#pragma once

#include <vector>

#include "nldiv/fields.hpp"
#include "nldiv/linalg.hpp"

// The A <-> M machinery: sphere quadrature rules, the diagonal scaling
// sigma(lambda), the spectral map N_A = O diag(sigma) O^T, the sphere-average
// recovery of A from N, and the construction of a kernel-modulating field M
// from an elliptic field A.

namespace nldiv {

struct SphereRule {
  int n = 0;
  std::vector<Vec> nodes;      // unit vectors
  std::vector<double> weights; // positive, sum to sphere_measure(n)
};

// n = 1: the two-point rule {-1,+1} with unit weights.
// n = 2: equiangular trapezoid rule with 64 * 2^level nodes.
// n = 3: Gauss-Legendre in cos(theta) (8 * 2^level nodes, the sin(theta)
//        area factor folded into the weights) times an equiangular rule
//        (16 * 2^level nodes) in the azimuth.
SphereRule sphere_rule(int n, int level);

// sigma_i = sqrt(lambdabar^{1/(n+2)} / lambda_i), lambdabar = prod lambda_i.
// Throws std::domain_error on non-positive eigenvalues.
std::vector<double> sigma_from_lambda(const std::vector<double>& lambda);

// Exact value of int_{S^{n-1}} phi_i^2 (sum_k sigma_k^2 phi_k^2)^{-(n+2)/2},
// equal to V_E / sigma_i^2 where V_E is the volume of the hyperellipsoid
// with semiaxes 1/sigma_k.
double hyperellipsoid_integral(const std::vector<double>& sigma, int i);

// N_A = O diag(sigma(lambda)) O^T from the eigendecomposition of A.
// Throws std::domain_error unless A is positive definite.
SymMat build_N(const SymMat& a);

// A_ij = (n/omega_{n-1}) int_{S^{n-1}} psi_i psi_j / |N psi|^{n+2}; inverse
// of build_N up to quadrature error.  Throws std::domain_error for singular N.
SymMat recover_A(const SymMat& n_mat, const SphereRule& rule);

// M(x,y) = (N_{A(x)} + N_{A(x+y)})/2 + H(y), with ellipticity constants
// derived from the eigenvalue bounds of A and the bound on H.
MatrixFieldM build_M_field(const MatrixFieldA& a, const HPerturbation& h);
MatrixFieldM build_M_field(const MatrixFieldA& a);

struct StructuralSample {
  Vec x, y, xi;
};

struct StructuralReport {
  double max_bound_violation = 0.0;      // of beta|xi| <= |M(x-y,y)xi| <= alpha|xi|
  double max_structural_violation = 0.0; // of M(x-y,y) = M(x,-y)
};

// Diagnostic sweep over sample triples (x, y, xi).
StructuralReport check_structural(const MatrixFieldM& m,
                                  const std::vector<StructuralSample>& samples);

// Measured joint Lipschitz estimate of (x,y) -> M(x,y) over random pairs in
// a box of the given radius; metadata for the pointwise-evaluation paths.
double estimate_M_lipschitz(const MatrixFieldM& m, double box_radius,
                            int samples, unsigned long long seed);

} // namespace nldiv
