#pragma once

#include "expanderlab/radial_profile.hpp"

#include <cstddef>
#include <vector>

namespace expanderlab::flow {

/// Radial translator Dirichlet problem on the disk of radius domain_radius
/// in R^{base_dimension}:
///   phi''/(1+phi'^2) + (d-1) phi'/rho + rho phi' / (2 eps^2) + lambda = 0,
///   phi'(0) = 0,  phi(domain_radius) = 0.
/// Its graph translates vertically at speed lambda under the 1/(2 eps^2)
/// flow. epsilon = +infinity drops the drift term (the classical forced
/// minimal-surface equation, solvable only for lambda below ~d/rho_0);
/// lambda = 0 forces phi == 0.
struct TranslatorParams {
    int base_dimension = 3;
    double epsilon = 1.0;  // +infinity allowed
    double lambda = 1.0;
    double domain_radius = 4.0;

    double drift_factor() const;  // 1/(2 eps^2), 0 at eps = +infinity
    void validate() const;
};

struct TranslatorSolveOptions {
    double residual_tolerance = 1e-9;
    int max_iterations = 80;
    bool check_invariants = true;  // phi >= 0 and radially nonincreasing
};

/// Damped Newton from the arrival-time seed lambda * v_eps (quadratic cap
/// when the closed form does not apply). The returned profile stores
/// base_dimension in dimension, so the curvature helpers produce the right
/// (d-1)/rho factors; cone_slope is 0.
ode::RadialProfile solve_translator(const TranslatorParams& params, std::size_t node_count,
                                    const TranslatorSolveOptions& options = {});

/// Sup of the discrete equation residual (axis + interior rows plus the
/// boundary value itself).
double translator_residual(const ode::RadialProfile& phi, const TranslatorParams& params);

/// Translator identity H - s<x,nu> + lambda <E,nu> = 0 with s = 1/(2 eps^2),
/// x the horizontal position, E the vertical unit vector and nu the upward
/// normal; sup of the violation over axis + interior nodes.
double smean_identity_residual(const ode::RadialProfile& phi, const TranslatorParams& params);

/// Largest H_s = H - s<x,nu> over all nodes; equals -lambda/W in the
/// continuum, so it must be strictly negative whenever lambda > 0.
double smean_curvature_max(const ode::RadialProfile& phi, const TranslatorParams& params);

/// Arrival time of the radial level-set flow, the exact solution of
///   -(d-1)/rho - rho/(2 eps^2) + 1/|v'| = 0, v(domain_radius) = 0:
///   v(rho) = eps^2 [ log((d-1) + rho0^2/(2 eps^2))
///                  - log((d-1) + rho^2 /(2 eps^2)) ].
/// Needs base_dimension >= 2 and finite epsilon. params.lambda is ignored.
double arrival_time_closed_form(const TranslatorParams& params, double rho);

struct ArrivalTimeReport {
    std::vector<double> lambdas;
    std::vector<double> sup_differences;     // size L-1: sup |v_{k+1} - v_k|
    std::vector<double> equation_residuals;  // size L, on [rho0/4, 3 rho0/4]
    double closed_form_gap = 0.0;            // sup |v_last - closed form|
    bool cauchy = false;                     // differences strictly decreasing
    bool residuals_decreasing = false;
};

/// Certifies that v_lambda = phi_{eps,lambda}/lambda converges to the
/// arrival time as lambda grows: Cauchy differences across an ascending
/// lambda_list (>= 3 entries) and arrival-equation residuals decreasing
/// along it. The equation residual is measured away from the axis (where
/// |v'| -> 0 makes it singular) on [rho0/4, 3 rho0/4]. base.lambda is
/// ignored; base supplies dimension, epsilon and the domain.
ArrivalTimeReport arrival_time_limit(const TranslatorParams& base,
                                     const std::vector<double>& lambda_list,
                                     std::size_t node_count);

} // namespace expanderlab::flow
