#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/errors.hpp"
#include "expanderlab/expander_ode.hpp"
#include "expanderlab/flow.hpp"

#include <cmath>
#include <vector>

using namespace expanderlab;

namespace {
ode::RadialProfile smooth_cone(int dimension, double slope, double R, std::size_t nodes) {
    ode::RadialProfile p;
    p.dimension = dimension;
    p.cone_slope = slope;
    p.grid = num::Grid1D::uniform(0.0, R, nodes);
    p.values.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        p.values[i] = std::sqrt(1.0 + slope * slope * p.grid[i] * p.grid[i]);
    return p;
}
} // namespace

TEST_CASE("solved expander drifts at the discretization scale only") {
    // frozen: 3.985548e-05 at (401, dt 0.02) and 9.964296e-06 at (801, 0.01)
    const auto coarse = flow::expander_fixed_point_drift(3, 1.0, 16.0, 401, 0.02, 1.0);
    CHECK(coarse.drift_sup == doctest::Approx(3.985548e-05).epsilon(1e-3));
    const auto fine = flow::expander_fixed_point_drift(3, 1.0, 16.0, 801, 0.01, 1.0);
    CHECK(coarse.drift_sup / fine.drift_sup == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("explicit euler cross-checks the semi-implicit stepper") {
    // dt must respect h^2/4; frozen drift 3.985752e-05 at dt = 2e-4
    const auto report = flow::expander_fixed_point_drift(3, 1.0, 16.0, 401, 2e-4, 1.0,
                                                         flow::TimeScheme::explicit_euler);
    CHECK(report.drift_sup == doctest::Approx(3.985752e-05).epsilon(1e-3));
}

TEST_CASE("normalized flow converges to the expander from a smooth cone") {
    const auto report = flow::normalized_convergence(2, 1.0, 40.0, 25.0, 801, 0.005);
    CHECK(report.certified);
    CHECK(report.errors_decreasing);
    CHECK(report.final_error <= 1e-2);
    REQUIRE(report.samples.size() >= 2);
    CHECK(report.samples.front() >= report.samples.back());
}

TEST_CASE("flat plane is a fixed point of the normalized flow") {
    const auto report = flow::normalized_convergence(3, 0.0, 40.0, 4.0, 401, 0.01);
    CHECK(report.final_error == 0.0);
}

TEST_CASE("rescaled flow equals the reparametrized plain flow") {
    // frozen: 5.292424e-05 at (241, 1e-3), ratio 4.000 under joint halving,
    // scale e^{s T} = 1.284025, plain-flow duration 0.648721
    const auto coarse = flow::reparametrization_check(2, 1.0, 0.5, 0.5, 12.0, 4.0, 241, 1e-3);
    CHECK(coarse.discrepancy == doctest::Approx(5.292424e-05).epsilon(1e-3));
    CHECK(coarse.scale == doctest::Approx(std::exp(0.25)).epsilon(1e-12));
    CHECK(coarse.mcf_duration ==
          doctest::Approx((std::exp(0.5) - 1.0)).epsilon(1e-12));
    const auto fine = flow::reparametrization_check(2, 1.0, 0.5, 0.5, 12.0, 4.0, 481, 5e-4);
    CHECK(coarse.discrepancy / fine.discrepancy == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("reparametrization transitivity across a different constant") {
    const auto report = flow::reparametrization_check(2, 1.0, 0.25, 1.0, 12.0, 4.0, 241, 1e-3);
    CHECK(report.discrepancy <= 1e-4);  // frozen 4.321265e-05
}

TEST_CASE("curvature evolution identity converges under refinement") {
    const auto run = [](std::size_t nodes, double dt) {
        flow::FlowOptions options;
        options.s = 0.5;
        options.dt = dt;
        return flow::run_radial_flow(smooth_cone(3, 1.0, 12.0, nodes), options, {}, 0.2, 0.1,
                                     10);
    };
    const auto coarse = run(601, 1e-3);
    const auto fine = run(1201, 5e-4);
    const double res_coarse = flow::h_evolution_residual(coarse, 1.0, 8.0);
    const double res_fine = flow::h_evolution_residual(fine, 1.0, 8.0);
    CHECK(res_coarse == doctest::Approx(3.973192e-04).epsilon(1e-2));
    CHECK(res_coarse / res_fine >= 2.5);  // frozen 3.757
    // dropping the reaction term breaks the identity at order one
    CHECK(flow::h_evolution_residual(coarse, 1.0, 8.0, true) >= 0.1);  // frozen 0.658
}

TEST_CASE("comparison ordering is preserved along the flow") {
    auto lower = smooth_cone(3, 1.0, 10.0, 201);
    auto upper = lower;
    for (std::size_t i = 0; i < upper.size(); ++i) {
        const double r = upper.grid[i];
        upper.values[i] += 0.4 * std::exp(-(r - 3.0) * (r - 3.0));
    }
    flow::FlowOptions options;
    options.dt = 1e-3;
    SUBCASE("with the position term") {
        options.s = 0.5;
        const auto report = flow::ordering_check(lower, upper, options, 0.5);
        CHECK(report.ordered);
        CHECK(report.max_violation <= 1e-12);  // frozen 1.4e-14
    }
    SUBCASE("plain mean curvature flow") {
        options.s = 0.0;
        const auto report = flow::ordering_check(lower, upper, options, 0.5);
        CHECK(report.ordered);
        CHECK(report.max_violation <= 1e-12);  // frozen 1.1e-14
    }
}

TEST_CASE("flat plane is stationary under the plain flow") {
    ode::RadialProfile flat;
    flat.dimension = 3;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 5.0, 101);
    flat.values.assign(101, 0.0);
    flow::FlowOptions options;
    options.dt = 1e-3;
    const auto trajectory = flow::run_radial_flow(flat, options, {}, 0.5);
    double sup = 0.0;
    for (double v : trajectory.profiles.back().values) sup = std::max(sup, std::abs(v));
    CHECK(sup == 0.0);
}

TEST_CASE("trajectory stores snapshots on the requested stride") {
    flow::FlowOptions options;
    options.s = 0.5;
    options.dt = 1e-3;
    const auto trajectory =
        flow::run_radial_flow(smooth_cone(3, 1.0, 12.0, 301), options, {}, 0.2, 0.1, 10);
    CHECK(trajectory.profiles.size() == 11);
    CHECK(trajectory.times.front() == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(trajectory.times.back() == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("blow-up guard throws instead of overflowing") {
    // a boundary datum racing to 1e9 drives the state past the threshold
    ode::RadialProfile flat;
    flat.dimension = 3;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 4.0, 81);
    flat.values.assign(81, 0.0);
    flow::FlowOptions options;
    options.dt = 1e-2;
    CHECK_THROWS_AS(flow::run_radial_flow(flat, options,
                                          [](double t) { return 1e9 * t; }, 1.0),
                    BlowUpError);
}

TEST_CASE("explicit scheme rejects steps past its stability bound") {
    const auto p = smooth_cone(3, 1.0, 4.0, 41);  // h = 0.1, bound dt <= 2.5e-3
    flow::FlowOptions options;
    options.dt = 0.05;
    options.scheme = flow::TimeScheme::explicit_euler;
    CHECK_THROWS_AS(flow::run_radial_flow(p, options, {}, 0.5), std::invalid_argument);
}
