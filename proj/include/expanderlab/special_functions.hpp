#pragma once

namespace expanderlab::num {

/// Gamma function on the positive real axis. Throws std::domain_error for
/// x <= 0 (the reflection branch is deliberately out of scope here).
double gamma_fn(double x);

/// log Gamma(x) for x > 0; use for quantities that overflow in linear scale.
double log_gamma(double x);

/// Volume of the unit ball in R^n, n >= 1.
double unit_ball_volume(int n);

/// p-dimensional volume (surface measure) of the round sphere S^p(radius)
/// sitting in R^{p+1}. p >= 0 (S^0 has volume 2), radius > 0.
double sphere_volume(int p, double radius);

/// log of sphere_volume, safe for large p.
double log_sphere_volume(int p, double radius);

} // namespace expanderlab::num
