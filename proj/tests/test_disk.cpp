#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/disk_solver.hpp"
#include "expanderlab/expander_ode.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace expanderlab;
using graph::BoundaryData;

namespace {

const BoundaryData cone = [](double x, double y) { return std::hypot(x, y); };
const BoundaryData half_cone = [](double x, double y) {
    return std::max(x, 0.5 * std::hypot(x, y));
};

double in_disk_sup_gap(const graph::GraphField& field,
                       const std::function<double(double, double)>& reference) {
    double sup = 0.0;
    for (std::size_t j = 0; j < field.side; ++j)
        for (std::size_t i = 0; i < field.side; ++i) {
            if (!field.inside[field.index(i, j)]) continue;
            const double gap =
                std::abs(field.values[field.index(i, j)] - reference(field.x_of(i), field.x_of(j)));
            sup = std::max(sup, gap);
        }
    return sup;
}

} // namespace

TEST_CASE("linear boundary data is reproduced to rounding") {
    const BoundaryData plane = [](double x, double y) { return 0.6 * x - 0.8 * y; };
    const auto field = graph::solve_dirichlet_disk(plane, 1.0, 4.0, 81);
    CHECK(in_disk_sup_gap(field, [&](double x, double y) { return 0.6 * x - 0.8 * y; }) <= 1e-10);
    CHECK(graph::disk_residual_sup(field, plane) <= 1e-8);
}

TEST_CASE("grid solution converges to the rotational solve under refinement") {
    const auto radial = ode::solve_radial_expander(2, 1.0, 4.0, 8001);
    const auto against_radial = [&](const graph::GraphField& field) {
        return in_disk_sup_gap(field, [&](double x, double y) {
            return ode::profile_interpolate(radial, std::hypot(x, y));
        });
    };
    const double coarse = against_radial(graph::solve_dirichlet_disk(cone, 1.0, 4.0, 81));
    const double fine = against_radial(graph::solve_dirichlet_disk(cone, 1.0, 4.0, 161));
    CHECK(fine <= 1.2e-4);
    CHECK(fine < coarse);
}

TEST_CASE("tail-decay certificate on a large disk") {
    const auto field = graph::solve_dirichlet_disk(cone, 1.0, 20.0, 101);
    const auto report = graph::uniqueness_estimate_check(field, cone);
    CHECK(report.certified);
    CHECK(report.bound == doctest::Approx(5.0));
    CHECK(report.worst_weighted_gap < report.bound);
    CHECK(report.worst_weighted_gap == doctest::Approx(1.0005).epsilon(2e-3));

    const auto asym_field = graph::solve_dirichlet_disk(half_cone, 1.0, 20.0, 101);
    const auto asym = graph::uniqueness_estimate_check(asym_field, half_cone);
    CHECK(asym.certified);
    CHECK(asym.worst_weighted_gap == doctest::Approx(3.82184).epsilon(2e-3));
}

TEST_CASE("certificate requires a large enough disk") {
    const auto field = graph::solve_dirichlet_disk(cone, 1.0, 4.0, 41);
    CHECK_THROWS_AS((void)graph::uniqueness_estimate_check(field, cone), std::invalid_argument);
}

TEST_CASE("ordered boundary data gives ordered solutions") {
    const BoundaryData lower = [](double x, double y) { return 0.5 * std::hypot(x, y); };
    const auto report = graph::comparison_ordering(lower, cone, 1.0, 4.0, 61);
    CHECK(report.ordered);
    CHECK(report.max_violation <= 1e-9);
    CHECK_THROWS_AS((void)graph::comparison_ordering(cone, lower, 1.0, 4.0, 61),
                    std::invalid_argument);
}

TEST_CASE("boundary data validation") {
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(BoundaryData{}, 1.0, 4.0, 41),
                    std::invalid_argument);
    const BoundaryData offset = [](double x, double y) { return std::hypot(x, y) + 1.0; };
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(offset, 2.0, 4.0, 41),
                    std::invalid_argument);
    const BoundaryData quadratic = [](double x, double) { return x * x; };
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(quadratic, 10.0, 4.0, 41),
                    std::invalid_argument);
    const BoundaryData steep = [](double x, double y) { return 3.0 * std::hypot(x, y); };
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(steep, 1.0, 4.0, 41),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(cone, 1.0, -4.0, 41),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)graph::solve_dirichlet_disk(cone, 1.0, 4.0, 5),
                    std::invalid_argument);
}

TEST_CASE("weighted area of the flat unit disk matches the closed form") {
    const double closed = 4.0 * std::numbers::pi * (std::exp(0.25) - 1.0);
    const BoundaryData zero = [](double, double) { return 0.0; };
    const auto field = graph::solve_dirichlet_disk(zero, 1.0, 1.0, 81);
    const auto grid_area = graph::weighted_area(field);
    CHECK_FALSE(grid_area.log_scale);
    CHECK(grid_area.value == doctest::Approx(closed).epsilon(1e-6));

    ode::RadialProfile flat;
    flat.dimension = 2;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 1.0, 1001);
    flat.values.assign(1001, 0.0);
    const auto radial_area = graph::weighted_area(flat);
    CHECK(radial_area.value == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("grid and rotational weighted areas agree on symmetric data") {
    const auto field = graph::solve_dirichlet_disk(cone, 1.0, 4.0, 121);
    const auto radial = ode::solve_radial_expander(2, 1.0, 4.0, 4001);
    const double grid_value = graph::weighted_area(field).value;
    const double radial_value = graph::weighted_area(radial).value;
    CHECK(grid_value == doctest::Approx(radial_value).epsilon(1e-2));
}

TEST_CASE("huge disks switch the area to log space") {
    ode::RadialProfile flat;
    flat.dimension = 2;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 60.0, 6001);
    flat.values.assign(6001, 0.0);
    const auto area = graph::weighted_area(flat);
    CHECK(area.log_scale);
    CHECK(std::isinf(area.value));
    // 4 pi (e^{900} - 1) in logs
    CHECK(area.log_value ==
          doctest::Approx(900.0 + std::log(4.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("random interior bumps never lower the weighted area") {
    const auto field = graph::solve_dirichlet_disk(cone, 1.0, 4.0, 81);
    const auto report = graph::minimality_check(field, 10);
    CHECK(report.minimal);
    CHECK(report.bump_count == 10);
    CHECK(report.worst_drop > 0.0);
    CHECK(report.area > 0.0);
    CHECK_THROWS_AS((void)graph::minimality_check(field, 0), std::invalid_argument);
}
