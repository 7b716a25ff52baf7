#include "expanderlab/spectral.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/quadrature.hpp"
#include "expanderlab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace expanderlab::spectral {

namespace {

void validate(const StabilityParams& p) {
    if (p.dimension < 3) throw std::invalid_argument("stability params: dimension must be >= 3");
    if (!(p.exponent > 0.0)) throw std::invalid_argument("stability params: exponent must be positive");
    if (!(p.inner_cutoff > 0.0 && p.inner_cutoff < 1.0))
        throw std::invalid_argument("stability params: inner cutoff must lie in (0, 1)");
    if (!(p.outer_cutoff > 1.0))
        throw std::invalid_argument("stability params: outer cutoff must exceed 1");
}

// e^{-t^2/4} - e^{-R^2/4} without cancellation for t <= R.
double gauss_drop(double t, double R) {
    return std::exp(-0.25 * t * t) * -std::expm1(-0.25 * (R * R - t * t));
}

// Slope of the ramp segment: the family is continuous at the inner cutoff.
double ramp_slope(const StabilityParams& p) {
    const double d = p.inner_cutoff;
    const double pw = p.exponent + 1.0 - 0.5 * p.dimension;
    return 2.0 * std::pow(d, pw - 1.0) * gauss_drop(d, p.outer_cutoff);
}

} // namespace

double stability_closed_form(int dimension, double lambda1, double exponent) {
    if (dimension < 3) throw std::invalid_argument("stability closed form: dimension must be >= 3");
    if (!(exponent > 0.0)) throw std::invalid_argument("stability closed form: exponent must be positive");
    const double n = dimension;
    const double e = exponent;
    const double a = lambda1 + (e + 1.0 - 0.5 * n) * (e + 1.0 - 0.5 * n);
    return std::exp2(2.0 * e - 1.0) *
           (a * num::gamma_fn(e) + 2.0 * (n - 1.0 - 2.0 * e) * num::gamma_fn(1.0 + e) +
            4.0 * num::gamma_fn(2.0 + e));
}

double stability_test_function(const StabilityParams& p, double t) {
    validate(p);
    const double d = p.inner_cutoff;
    if (t < 0.5 * d || t >= p.outer_cutoff) return 0.0;
    if (t < d) return ramp_slope(p) * (t - 0.5 * d);
    const double pw = p.exponent + 1.0 - 0.5 * p.dimension;
    return std::pow(t, pw) * gauss_drop(t, p.outer_cutoff);
}

double stability_test_slope(const StabilityParams& p, double t) {
    validate(p);
    const double d = p.inner_cutoff;
    if (t < 0.5 * d || t >= p.outer_cutoff) return 0.0;
    if (t < d) return ramp_slope(p);
    const double pw = p.exponent + 1.0 - 0.5 * p.dimension;
    return pw * std::pow(t, pw - 1.0) * gauss_drop(t, p.outer_cutoff) -
           0.5 * t * std::pow(t, pw) * std::exp(-0.25 * t * t);
}

StabilityQuadrature stability_quadrature(int dimension, double lambda1,
                                         const std::function<double(double)>& eta,
                                         const std::function<double(double)>& eta_slope,
                                         double support_lo, double support_hi,
                                         double tol) {
    if (dimension < 3) throw std::invalid_argument("stability quadrature: dimension must be >= 3");
    if (!(support_lo >= 0.0)) throw std::invalid_argument("stability quadrature: support starts below 0");

    bool log_space = false;
    auto integrand = [&](double t) -> double {
        const double v = eta(t);
        const double s = eta_slope(t);
        const double bracket = lambda1 * v * v + 0.5 * t * t * v * v + t * t * s * s;
        if (bracket == 0.0) return 0.0;
        const double arg = (dimension - 3) * std::log(t) + 0.25 * t * t;
        if (arg < 500.0) return bracket * std::exp(arg);
        // Direct weight evaluation would overflow; fold it into the bracket.
        log_space = true;
        const double total = std::log(std::abs(bracket)) + arg;
        if (total > 700.0)
            throw QuadratureError("stability integrand exceeds double range", 0.0, 0.0);
        return std::copysign(std::exp(total), bracket);
    };

    const num::QuadratureResult q = num::integrate(integrand, support_lo, support_hi, tol);
    return {q.value, q.error_estimate, log_space};
}

StabilityQuadrature stability_family_quadrature(const StabilityParams& p, double tol) {
    validate(p);
    const double n = p.dimension;
    const double eps = p.exponent;
    const double delta = p.inner_cutoff;
    const double R = p.outer_cutoff;
    const double pw = eps + 1.0 - 0.5 * n;

    // Main segment. With eta = t^pw (e^{-t^2/4} - e^{-R^2/4}) every e^{t^2/4}
    // in the weight cancels analytically:
    //   integrand = t^{2 eps - 1} e^{-t^2/4} ((lambda1 + t^2/2) m^2 + (pw m - t^2/2)^2),
    // m = 1 - e^{-(R^2-t^2)/4}. No overflow for any cutoff.
    auto main_part = [&](double t) {
        const double m = -std::expm1(-0.25 * (R * R - t * t));
        const double a = (p.lambda1 + 0.5 * t * t) * m * m;
        const double b = pw * m - 0.5 * t * t;
        return std::pow(t, 2.0 * eps - 1.0) * std::exp(-0.25 * t * t) * (a + b * b);
    };

    // t^{2 eps - 1} can be singular at the inner cutoff end; split the range
    // geometrically so the adaptive rule sees each decade at its own scale.
    std::vector<double> cuts{delta};
    for (double c = 10.0 * delta; c < 1.0; c *= 10.0) cuts.push_back(c);
    cuts.push_back(1.0);
    cuts.push_back(R);

    const double piece_tol = tol / static_cast<double>(cuts.size());
    double value = 0.0;
    double err = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const num::QuadratureResult q = num::integrate(main_part, cuts[i], cuts[i + 1], piece_tol);
        value += q.value;
        err += q.error_estimate;
        evals += q.evaluations;
    }

    // Ramp segment [delta/2, delta): eta linear, slope c. All factors stay
    // modest because t < 1.
    const double c = ramp_slope(p);
    auto ramp_part = [&](double t) {
        const double v = c * (t - 0.5 * delta);
        const double bracket = p.lambda1 * v * v + 0.5 * t * t * v * v + t * t * c * c;
        return bracket * std::pow(t, n - 3.0) * std::exp(0.25 * t * t);
    };
    const num::QuadratureResult q = num::integrate(ramp_part, 0.5 * delta, delta, piece_tol);
    value += q.value;
    err += q.error_estimate;

    return {value, err, false};
}

ConeStability classify_cone(const ConeEigendata& data) {
    if (!std::isfinite(data.lambda1))
        throw std::invalid_argument("cone classification: lambda1 must be finite");
    const double margin = data.lambda1 + 0.25 * (data.dimension - 2.0) * (data.dimension - 2.0);
    return margin <= 0.0 ? ConeStability::unstable : ConeStability::stable;
}

ConeEigendata product_sphere_eigendata(int p, int q) {
    if (p < 1 || q < 1)
        throw std::invalid_argument("product sphere eigendata: both factors need dimension >= 1");
    const int n = p + q + 1;
    return {n, -(n - 1.0), n - 1.0};
}

namespace {

struct JacobiStencil {
    double value;  // L0 w by central stencils
    double scale;  // sum of the term magnitudes; the conditioning scale
};

JacobiStencil jacobi_apply(int n, const std::function<double(double)>& w, double r, double h) {
    const double wm = w(r - h);
    const double w0 = w(r);
    const double wp = w(r + h);
    const double d1 = (wp - wm) / (2.0 * h);
    const double d2 = (wp - 2.0 * w0 + wm) / (h * h);
    const double conv = (n - 1.0) / r + 0.5 * r;
    return {d2 + conv * d1 - 0.5 * w0,
            std::abs(d2) + std::abs(conv * d1) + 0.5 * std::abs(w0)};
}

void check_stencil(double r, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("jacobi identity: stencil width must be positive");
    if (!(r > h)) throw std::invalid_argument("jacobi identity: radius must exceed the stencil width");
}

} // namespace

double jacobi_power_identity_residual(int dimension, double tau, double r,
                                      double stencil_width) {
    check_stencil(r, stencil_width);
    auto w = [&](double x) { return std::pow(x, -dimension - 1.0 + tau) * std::exp(-0.25 * x * x); };
    const JacobiStencil left = jacobi_apply(dimension, w, r, stencil_width);
    const double factor =
        -0.5 * tau + (3.0 * (dimension + 1.0) - (dimension + 4.0) * tau + tau * tau) / (r * r);
    const double right = factor * w(r);
    // The two sides of the identity nearly cancel against the individual
    // operator terms, so measure the defect against the term scale rather
    // than the (tiny) output.
    return std::abs(left.value - right) / std::max(left.scale, std::abs(right));
}

double jacobi_affine_identity_residual(int dimension, double t, double s,
                                       double r, double stencil_width) {
    check_stencil(r, stencil_width);
    if (t == 0.0) return 0.0;
    auto w = [&](double x) {
        return t * (x + s) * std::pow(x, -dimension - 2.0) * std::exp(-0.25 * x * x);
    };
    const JacobiStencil left = jacobi_apply(dimension, w, r, stencil_width);
    const double base = t * std::pow(r, -dimension - 2.0) * std::exp(-0.25 * r * r);
    const double right =
        base * (0.5 * s + (3.0 * dimension + 3.0) / r + (4.0 * dimension + 8.0) * s / (r * r));
    return std::abs(left.value - right) / std::max(left.scale, std::abs(right));
}

} // namespace expanderlab::spectral
