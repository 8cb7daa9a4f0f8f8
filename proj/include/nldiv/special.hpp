#pragma once

// Scalar special functions: Euler Gamma and the normalizing constant of the
// fractional kernel.

namespace nldiv {

// Euler Gamma function, Lanczos approximation (g = 7) with reflection for
// arguments below 1/2.  Relative error is ~1e-15 on (0, 30].
// Throws std::domain_error for x <= 0.
double gamma_fn(double x);

// ln Gamma(x) for x > 0.
double lgamma_fn(double x);

// Kernel normalizing constant
//   c_{n,s} = 2^{2s} Gamma((n+2s)/2) s (1-s) / (pi^{n/2} Gamma(2-s)),
// chosen so that both s->0 and s->1 recover the classical limits:
//   c_{n,s}/s     -> 2/omega_{n-1}   as s->0,
//   c_{n,s}/(1-s) -> 4n/omega_{n-1}  as s->1.
// Throws std::domain_error unless n in {1,2,3} and s in (0,1).
double c_ns(int n, double s);

// Surface measure of the unit sphere S^{n-1}.  For n = 1 the sphere is the
// two-point set {-1,+1} with counting measure, so omega_0 = 2.
double sphere_measure(int n);

// Volume of the unit ball in R^n (= sphere_measure(n)/n).
double ball_volume(int n);

} // namespace nldiv
