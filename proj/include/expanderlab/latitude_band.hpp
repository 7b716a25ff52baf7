#pragma once

#include "expanderlab/grid.hpp"

#include <cstddef>
#include <vector>

namespace expanderlab::graph {

/// Log-radial graph over a rotational latitude band of the unit n-sphere.
/// The graph function depends on the polar angle only; values are <= 0 with
/// zeros at both band ends. epsilon may be +infinity, which drops the
/// exponential weight term (the unweighted limit equation). The derivation
/// of the reduced band equation is documented in docs/latitude_band_reduction.md.
struct LatitudeField {
    double epsilon = 1.0;
    int sphere_dimension = 2;
    num::Grid1D theta_grid = num::Grid1D::uniform(1.0, 2.0, 3);
    std::vector<double> values;
    double residual_sup = 0.0;
    double gradient_sup = 0.0;  // observed max |d values / d theta|
};

struct LatitudeSolveOptions {
    double residual_tolerance = 1e-8;
    int max_iterations = 60;
    int max_halvings = 30;
};

/// Solves the reduced band equation
///   v'' / (1 + v'^2) + (n-1) cot(theta) v' - exp(2 v) / (2 eps^2) = n
/// with zero Dirichlet values at theta1 and theta2, by damped Newton from the
/// zero seed. Requires 0 < theta1 < theta2 < pi and node_count >= 5; throws
/// SolveError on non-convergence and certifies values <= 0 on return.
LatitudeField solve_latitude_band(double epsilon, double theta1, double theta2,
                                  int sphere_dimension, std::size_t node_count,
                                  const LatitudeSolveOptions& options = {});

/// Sup over interior nodes of the discrete band-equation residual.
double latitude_band_residual(const LatitudeField& field);

} // namespace expanderlab::graph
