#pragma once

namespace shipbreak {

// Limiting distribution of a least-squares break-date estimator around the
// true date. The estimator's scaled deviation converges to argmax_s V(s),
//   V(s) = W1(-s) - |s|/2          for s <= 0,
//   V(s) = sqrt(phi)*W2(s) - xi*s/2  for s > 0,
// with W1, W2 independent standard Wiener processes. xi > 0 weights the
// post-break regressor second moment against the pre-break one; phi > 0 does
// the same for the long-run error variance. xi = phi = 1 is the symmetric
// case.
//
// break_argmax_cdf returns P(argmax <= x) in closed form (exact up to
// floating-point error; no quadrature). break_argmax_quantile inverts it by
// bracketed bisection to ~1e-10 in probability.
//
// Useful identities: cdf(0) = xi / (xi + phi); cdf is continuous and strictly
// increasing; symmetric case has median 0.
double break_argmax_cdf(double x, double xi, double phi);
double break_argmax_quantile(double p, double xi, double phi);

} // namespace shipbreak
