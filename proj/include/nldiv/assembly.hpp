#pragma once

#include <limits>
#include <vector>

#include "nldiv/kernel.hpp"
#include "nldiv/mesh.hpp"

// Galerkin assembly of the nonlocal bilinear form over the P1 hat basis:
//   S[i][j] = 1/2 iint (phi_i(x)-phi_i(z))(phi_j(x)-phi_j(z)) K(x,z) dx dz
// decomposed into interior-interior element pairs plus the interior-exterior
// contribution of the zero extension.  Identical and touching element pairs
// are integrated in closed form against the pure power kernel with the
// matrix factor frozen at the pair barycenter; separated pairs use tensor
// Gauss rules with the horizon cutoff resolved exactly in the inner
// variable.

namespace nldiv {

struct AssemblyOptions {
  int gl_near = 12;       // tensor order for gaps 2..3
  int gl_far = 8;         // gaps >= 4
  int gl_x = 10;          // x-rule of the exterior term
  int boundary_grading = 30;
  double r_cut_factor = 50.0; // exterior truncation at factor * diam(domain)
  double tol_asm = std::numeric_limits<double>::infinity(); // per-entry budget
  int threads = 1;
};

struct StiffnessMatrix {
  Mesh mesh;
  int nd = 0;
  double s = 0.0;
  double rho = 0.0;
  std::vector<double> a; // dense nd x nd, row-major, symmetric
  double cert_error = 0.0; // estimated per-entry quadrature/truncation bound
  int gl_near = 0, gl_far = 0;

  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * nd + j]; }
  std::vector<double> apply(const std::vector<double>& u) const;
  double quad_form(const std::vector<double>& u) const; // <Su, u>
};

// Throws std::runtime_error when the certified per-entry bound exceeds
// opts.tol_asm (message carries the achieved bound).
StiffnessMatrix assemble_stiffness(const KernelSpec& k, const Mesh& mesh,
                                   const AssemblyOptions& opts = {});

// Gagliardo seminorm [u]_s of the discrete function: the same assembly
// machinery with the identity-modulated kernel, [u]_s = sqrt(2 <S u, u>).
double gagliardo_seminorm(const DiscreteFunction& u, double s);

namespace detail {
// closed forms behind the touching-pair quadrature, exposed for the
// brute-force cross-checks:
//   identical_pair_base = 2 int_0^min(h,cap) (h-t) t^{1-2s} dt
//   adjacent moments m20/m11 of u^2 resp. uv against (u+v)^{-1-2s} over the
//   unit square pair, capped at min(2h, cap)
double identical_pair_base(double h, double s, double cap);
void adjacent_pair_moments(double h, double s, double cap, double* m20,
                           double* m11);
} // namespace detail

} // namespace nldiv
