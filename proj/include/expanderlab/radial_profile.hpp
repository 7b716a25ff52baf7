#pragma once

#include "expanderlab/grid.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace expanderlab::ode {

/// Barrier constants for the radial self-expanding graph equation.
/// Upper barrier kappa*r + K/r with K = 2+2*kappa when the graph dimension
/// is 2 and K = (dimension-1)*kappa for dimension >= 3; the single-variable
/// problem uses kappa*y + (tau/y)*exp(-y^2/4) with tau = 2e*max(kappa, 2).
struct BarrierSpec {
    int dimension = 2;
    double cone_slope = 0.0;

    double upper_constant() const;
    double line_constant() const;
};

/// Sampled radial solution u(r) on [0, R]. dimension == 1 selects the
/// single-variable equation (no (n-1)/r term); cone_slope is the asymptotic
/// slope kappa of the boundary cone. Profiles are treated as immutable once
/// a solver returns them.
struct RadialProfile {
    int dimension = 2;
    double cone_slope = 0.0;
    num::Grid1D grid = num::Grid1D::uniform(0.0, 1.0, 3);
    std::vector<double> values;

    double outer_radius() const { return grid.back(); }
    std::size_t size() const { return values.size(); }
};

/// Second-order derivative stencils on profile nodes. Interior nodes use
/// central differences; node 0 assumes even symmetry (u'(0) = 0); the last
/// node uses a one-sided second-order stencil.
double profile_derivative(const RadialProfile& p, std::size_t i);
double profile_second_derivative(const RadialProfile& p, std::size_t i);

/// Rotational-graph curvature quantities at node i. The scalar mean
/// curvature is taken with respect to the upward normal, H = div(Du/W):
/// principal curvatures u_rr/W^3 and u_r/(r W) with multiplicity
/// dimension-1; at r = 0 the radial limit gives H = dimension * u_rr(0).
double profile_mean_curvature(const RadialProfile& p, std::size_t i);
double profile_shape_norm_sq(const RadialProfile& p, std::size_t i);

/// Laplace-Beltrami operator of a scalar field sampled on the profile's
/// nodes, evaluated on the graph surface at interior node i:
///   (P_{i+1/2}(f_{i+1}-f_i) - P_{i-1/2}(f_i-f_{i-1})) / (h^2 W_i r_i^{n-1})
/// with P = r^{n-1}/W averaged to half nodes (conservative form). Requires
/// 1 <= i <= size-2; the field must share the profile's grid.
double profile_laplace_beltrami(const RadialProfile& p, std::span<const double> field,
                                std::size_t i);

/// Cubic (4-point Lagrange) interpolation of u and u' at arbitrary radius.
double profile_interpolate(const RadialProfile& p, double r);
double profile_interpolate_derivative(const RadialProfile& p, double r);

} // namespace expanderlab::ode
