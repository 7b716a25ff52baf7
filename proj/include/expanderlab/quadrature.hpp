#pragma once

#include <functional>

namespace expanderlab::num {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b]. b may be +infinity,
/// in which case the integrand must decay at least like exp(-t^2/8) and the
/// tail beyond the truncation point contributes less than tol/10.
///
/// tol is treated as an absolute target with a relative floor: refinement
/// stops once the summed error estimate is below max(tol, tol*|value|).
/// Exhausting the subdivision budget throws QuadratureError carrying the
/// best estimate. All Kronrod nodes are interior, so integrable endpoint
/// singularities (t^{-0.9} and the like) are handled without special casing.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, int max_intervals = 20000);

/// Truncation point T such that int_T^inf exp(-t^2/8) dt < tol / 10.
double gaussian_tail_cutoff(double tol);

} // namespace expanderlab::num
