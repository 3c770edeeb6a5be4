#pragma once

// Stable kernels for damped quadratic-potential dynamics.  The argument `a`
// is the squared effective frequency Omega^2 = gamma^2/4 - V''/m; positive
// values select the hyperbolic branch, negative the trigonometric one, and
// the near-zero region is evaluated by series so both branches join smoothly.

namespace slb {

// cosh(sqrt(a) t)            for a > 0
// cos(sqrt(-a) t)            for a < 0
double cosh_like(double a, double t);

// sinh(sqrt(a) t)/sqrt(a)    for a > 0
// sin(sqrt(-a) t)/sqrt(-a)   for a < 0
double sinhc_like(double a, double t);

// The same kernels premultiplied by exp(-gamma t / 2).  For the hyperbolic
// branch the product is formed from the two decay rates directly so that
// large arguments do not overflow before the damping is applied.
double damped_cosh_like(double a, double gamma, double t);
double damped_sinhc_like(double a, double gamma, double t);

// (1 - e^{-gamma t}) / gamma, finite as gamma -> 0 (limit t).
double expm1_ratio(double gamma, double t);

// (gamma t - 1 + e^{-gamma t}) / gamma^2, finite as gamma -> 0 (limit t^2/2).
// Position response to a constant unit force under friction gamma.
double drift_kernel(double gamma, double t);

}  // namespace slb
