#pragma once

#include <functional>

namespace expanderlab::spectral {

/// Parameters of the one-variable stability integral
///   I0(eta) = int_0^inf (lambda1*eta^2 + t^2*eta^2/2 + t^2*eta'^2) t^{n-3} e^{t^2/4} dt
/// together with the cutoffs of the built-in test family. The family is zero
/// on (0, inner_cutoff/2), a linear ramp on [inner_cutoff/2, inner_cutoff),
/// t^{exponent+1-n/2} (e^{-t^2/4} - e^{-outer_cutoff^2/4}) up to outer_cutoff,
/// and zero beyond.
struct StabilityParams {
    int dimension = 3;        // n >= 3
    double lambda1 = 0.0;     // first eigenvalue of Delta_Sigma + |A_Sigma|^2
    double exponent = 0.5;    // power in the test family, > 0
    double inner_cutoff = 1e-3;  // ramp ends here; in (0, 1)
    double outer_cutoff = 30.0;  // support ends here; > 1
};

/// Eigendata of a minimal cone with constant-curvature cross-section.
/// Genuine minimal cones satisfy lambda1 = -shape_norm_sq <= 1-n, but
/// classification itself only needs lambda1 to be finite, so boundary
/// probes like lambda1 = -(n-2)^2/4 are accepted.
struct ConeEigendata {
    int dimension = 3;        // n, dimension of the cone
    double lambda1 = 0.0;
    double shape_norm_sq = 0.0;  // |A_Sigma|^2 on the cross-section
};

enum class ConeStability { stable, unstable };

/// Closed form of the stability integral on the limiting test function
/// t^{exponent+1-n/2} e^{-t^2/4}:
///   2^{2e-1} ((lambda1 + (e+1-n/2)^2) Gamma(e)
///             + 2(n-1-2e) Gamma(1+e) + 4 Gamma(2+e)).
/// Diverges to -inf as exponent -> 0+ exactly when lambda1 + (n-2)^2/4 < 0;
/// at equality the Gamma(e) coefficient is e(e-(n-2)), the divergence
/// cancels, and the limit is the positive value (n+4)/2.
double stability_closed_form(int dimension, double lambda1, double exponent);

/// The built-in test function and its slope (zero outside the support,
/// left-continuous at the ramp kink).
double stability_test_function(const StabilityParams& p, double t);
double stability_test_slope(const StabilityParams& p, double t);

struct StabilityQuadrature {
    double value = 0.0;
    double error_estimate = 0.0;
    // Set when the weight t^{n-3} e^{t^2/4} had to be folded into the
    // bracket in log space because direct evaluation would overflow.
    bool log_space_used = false;
};

/// Stability integral of an arbitrary test function given by callables for
/// its value and slope, integrated over [support_lo, support_hi].
/// support_hi may be +infinity if eta decays at least like e^{-t^2/2}.
/// Throws QuadratureError if the integrand itself exceeds double range.
StabilityQuadrature stability_quadrature(int dimension, double lambda1,
                                         const std::function<double(double)>& eta,
                                         const std::function<double(double)>& eta_slope,
                                         double support_lo, double support_hi,
                                         double tol = 1e-9);

/// Stability integral of the built-in family. The e^{t^2/4} weight is
/// cancelled analytically against the family's own Gaussian factor, so this
/// path cannot overflow and stays accurate for cutoffs far beyond the range
/// the generic path can represent. Relative accuracy ~1e-8.
StabilityQuadrature stability_family_quadrature(const StabilityParams& p,
                                                double tol = 1e-9);

/// Unstable iff lambda1 + (n-2)^2/4 <= 0 (equality counts as unstable).
ConeStability classify_cone(const ConeEigendata& data);

/// Eigendata of the cone over S^p(sqrt(p/(p+q))) x S^q(sqrt(q/(p+q))),
/// minimal in S^{p+q+1}: cone dimension n = p+q+1, |A_Sigma|^2 = n-1,
/// constant first eigenfunction with lambda1 = -(n-1). p = q = k gives the
/// classical family that turns stable at k = 3 (n = 7).
ConeEigendata product_sphere_eigendata(int p, int q);

/// Relative residual of the radial Jacobi-operator identity
///   L0(r^{-n-1+tau} e^{-r^2/4})
///     = (-tau/2 + (3(n+1) - (n+4)tau + tau^2)/r^2) r^{-n-1+tau} e^{-r^2/4}
/// where L0 w = w'' + ((n-1)/r + r/2) w' - w/2, the left side evaluated by
/// central second-order stencils of the given width. The defect is measured
/// relative to the magnitude of the operator terms (the two sides nearly
/// cancel against them, so output-relative would overstate it). Second order
/// in the stencil width; requires r > stencil_width.
double jacobi_power_identity_residual(int dimension, double tau, double r,
                                      double stencil_width = 1e-3);

/// Same for the affine-factor test function t(r+s) r^{-n-2} e^{-r^2/4},
/// whose image under L0 is
///   t r^{-n-2} e^{-r^2/4} (s/2 + (3n+3)/r + (4n+8) s / r^2).
/// Both sides are linear in t, so the relative residual is t-independent;
/// t = 0 returns 0.
double jacobi_affine_identity_residual(int dimension, double t, double s,
                                       double r, double stencil_width = 1e-3);

} // namespace expanderlab::spectral
