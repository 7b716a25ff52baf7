#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/errors.hpp"
#include "expanderlab/expander_ode.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace expanderlab;

namespace {
double residual_sup(const ode::RadialProfile& p) {
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < p.size(); ++i)
        sup = std::max(sup, std::abs(ode::radial_expander_residual(p, i)));
    return sup;
}
} // namespace

TEST_CASE("cone residual has the closed form kappa (n-1)/r") {
    // u = kappa r satisfies J(u) = kappa (n-1)/r exactly; the discrete
    // stencil reproduces it to machine precision because u'' = 0 exactly.
    ode::RadialProfile cone;
    cone.dimension = 5;
    cone.cone_slope = 1.5;
    cone.grid = num::Grid1D::uniform(0.0, 8.0, 801);
    cone.values.resize(cone.size());
    for (std::size_t i = 0; i < cone.size(); ++i) cone.values[i] = 1.5 * cone.grid[i];
    for (std::size_t i : {40u, 100u, 400u, 780u}) {
        const double r = cone.grid[i];
        CHECK(ode::radial_expander_residual(cone, i) ==
              doctest::Approx(1.5 * 4.0 / r).epsilon(1e-11));
    }
}

TEST_CASE("upper barrier has nonpositive residual where the bound bites") {
    // u = kappa r + (n-1) kappa / r lies above the solution; J of it <= 0
    ode::RadialProfile upper;
    upper.dimension = 3;
    upper.cone_slope = 1.0;
    upper.grid = num::Grid1D::uniform(1.0, 8.0, 1401);
    upper.values.resize(upper.size());
    for (std::size_t i = 0; i < upper.size(); ++i) {
        const double r = upper.grid[i];
        upper.values[i] = r + 2.0 / r;
    }
    const std::size_t i = upper.grid.interval_of(2.0);
    CHECK(ode::radial_expander_residual(upper, i) <= 0.0);
}

TEST_CASE("hyperplane residual vanishes") {
    ode::RadialProfile flat;
    flat.dimension = 3;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 5.0, 101);
    flat.values.assign(101, 0.0);
    for (std::size_t i = 1; i + 1 < flat.size(); ++i)
        CHECK(ode::radial_expander_residual(flat, i) == 0.0);
}

TEST_CASE("residual refuses boundary nodes") {
    ode::RadialProfile p;
    p.dimension = 3;
    p.cone_slope = 1.0;
    p.grid = num::Grid1D::uniform(0.0, 2.0, 11);
    p.values.assign(11, 0.0);
    CHECK_THROWS_AS((void)ode::radial_expander_residual(p, 10), std::invalid_argument);
}

TEST_CASE("rotational solve meets residual, sandwich, and monotonicity") {
    const auto p = ode::solve_radial_expander(3, 1.0, 20.0, 2001);
    CHECK(residual_sup(p) <= 1e-8);
    const double K = ode::BarrierSpec{3, 1.0}.upper_constant();
    CHECK(K == doctest::Approx(2.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        CHECK(p.values[i] >= r - 1e-9);
        if (r >= 1.0) CHECK(p.values[i] <= r + K / r + 1e-9);
        if (i > 0) CHECK(p.values[i] >= p.values[i - 1] - 1e-10);
    }
}

TEST_CASE("n = 2 uses the inflated barrier constant 2 + 2 kappa") {
    CHECK(ode::BarrierSpec{2, 1.0}.upper_constant() == doctest::Approx(4.0));
    const auto p = ode::solve_radial_expander(2, 1.0, 20.0, 2001);
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        if (r >= std::numbers::sqrt2) CHECK(p.values[i] <= r + 4.0 / r + 1e-9);
    }
}

TEST_CASE("near-flat slope collapses onto the barrier pair") {
    const auto p = ode::solve_radial_expander(3, 1e-6, 20.0, 1001);
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.values[i] >= 1e-6 * p.grid[i] - 1e-9);
        CHECK(p.values[i] <= 1e-6 * p.grid[i] + 1e-5);
    }
}

TEST_CASE("asymptotic constant approaches (n-1) kappa within 5 percent") {
    struct Case {
        int n;
        double kappa;
        double expect;
    };
    // frozen from a R = 40, h = 0.005 sweep; the fit sits 0.5% - 1.7% below
    // (n-1) kappa because the window still sees the r^{-3} correction
    const Case cases[] = {{3, 1.0, 1.989885}, {5, 2.0, 7.914532}, {7, 0.5, 2.953118}};
    for (const auto& c : cases) {
        const auto p = ode::solve_radial_expander(c.n, c.kappa, 40.0, 8001);
        const double fitted = ode::asymptotic_constant(p);
        CHECK(fitted == doctest::Approx(c.expect).epsilon(1e-3));
        CHECK(std::abs(fitted - (c.n - 1) * c.kappa) / ((c.n - 1) * c.kappa) <= 0.05);
    }
}

TEST_CASE("entire-solution certificate holds along increasing radii") {
    const auto report = ode::entire_limit_bounds(3, 1.0, {10.0, 20.0, 40.0});
    CHECK(report.all_pass());
    REQUIRE(report.sup_differences.size() == 2);
    // frozen ratio 1.983 per doubling; require a conservative floor
    CHECK(report.sup_differences[0] / report.sup_differences[1] >= 1.7);
}

TEST_CASE("traced curvature identity converges at second order") {
    const auto coarse = ode::solve_radial_expander(3, 1.0, 30.0, 2001);
    const auto fine = ode::solve_radial_expander(3, 1.0, 30.0, 4001);
    const double res_coarse = ode::mean_curvature_identity_residual(coarse);
    const double res_fine = ode::mean_curvature_identity_residual(fine);
    CHECK(res_coarse <= 5e-5);   // frozen 3.086e-05
    CHECK(res_fine <= 0.55 * res_coarse);  // frozen ratio 3.79
}

TEST_CASE("sphere-like non-solution fails the curvature identity loudly") {
    ode::RadialProfile bogus;
    bogus.dimension = 3;
    bogus.cone_slope = 1.0;
    bogus.grid = num::Grid1D::uniform(0.0, 6.0, 1201);
    bogus.values.resize(bogus.size());
    for (std::size_t i = 0; i < bogus.size(); ++i) {
        const double r = bogus.grid[i];
        bogus.values[i] = std::sqrt(49.0 - r * r);  // sphere cap, not a solution
    }
    CHECK(ode::mean_curvature_identity_residual(bogus) >= 1e-2);  // frozen 3.772e-02
}

TEST_CASE("one-dimensional solve obeys the exponential barrier") {
    const auto p = ode::solve_expander_line(1.0, 10.0, 2001);
    CHECK(residual_sup(p) <= 1e-8);
    const double tau = ode::BarrierSpec{1, 1.0}.line_constant();
    CHECK(tau == doctest::Approx(4.0 * std::numbers::e));
    const std::size_t i5 = p.grid.interval_of(5.0);
    const double gap = p.values[i5] - p.grid[i5];
    // frozen gap 2.599e-07 against envelope 4.198e-03
    CHECK(gap > 0.0);
    CHECK(gap <= tau / 5.0 * std::exp(-25.0 / 4.0));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double y = p.grid[i];
        CHECK(p.values[i] >= y - 1e-9);
        if (y >= 1.0)
            CHECK(p.values[i] <=
                  y + std::min(tau / y * std::exp(-0.25 * y * y), 5.0) + 1e-9);
    }
}

TEST_CASE("steep 1-D solution stays inside the capped envelope") {
    const auto p = ode::solve_expander_line(3.0, 10.0, 2001);
    const double tau = ode::BarrierSpec{1, 3.0}.line_constant();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double y = p.grid[i];
        CHECK(p.values[i] >= 3.0 * y - 1e-9);
        if (y >= 1.0)
            CHECK(p.values[i] <=
                  3.0 * y + std::min(tau / y * std::exp(-0.25 * y * y), 11.0) + 1e-9);
    }
    // at kappa = 3 the weight e^{-(1+kappa^2) y^2/4} underflows the gap to
    // zero well inside the domain, so only the sandwich is asserted
    const std::size_t i5 = p.grid.interval_of(5.0);
    CHECK(p.values[i5] - 3.0 * p.grid[i5] >= 0.0);
}

TEST_CASE("two-sided 1-D solve is even") {
    const auto two = ode::solve_expander_line_two_sided(1.0, 10.0, 4001);
    REQUIRE(two.size() == 4001);
    const std::size_t mid = 2000;
    double asym = 0.0;
    for (std::size_t k = 0; k <= mid; ++k)
        asym = std::max(asym, std::abs(two[mid + k] - two[mid - k]));
    CHECK(asym <= 1e-12);  // frozen 1.51e-14
    // frozen: one-sided and two-sided solves agree to 5.6e-13
    const auto one = ode::solve_expander_line(1.0, 10.0, 2001);
    double gap = 0.0;
    for (std::size_t k = 0; k < one.size(); ++k)
        gap = std::max(gap, std::abs(one.values[k] - two[mid + k]));
    CHECK(gap <= 1e-10);
}

TEST_CASE("monotonicity identity mismatch shrinks at second order in the step") {
    const auto p = ode::solve_radial_expander(3, 1.0, 20.0, 4001);
    const auto coarse = ode::monotonicity_identity_check(p, {2.0, 4.0, 8.0}, 0.04);
    const auto fine = ode::monotonicity_identity_check(p, {2.0, 4.0, 8.0}, 0.02);
    CHECK(fine.max_mismatch <= 1e-4);
    CHECK(coarse.max_mismatch / fine.max_mismatch >= 3.0);
    // rho = 2 lies below u(0) ~ 2.195, so the ball cuts an empty region and
    // both sides vanish identically
    CHECK(fine.checks[0].mismatch == 0.0);
}

TEST_CASE("solver rejects nonsense arguments") {
    CHECK_THROWS_AS((void)ode::solve_radial_expander(1, 1.0, 20.0, 101),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ode::solve_radial_expander(3, -1.0, 20.0, 101),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ode::solve_radial_expander(3, 1.0, 0.5, 101),
                    std::invalid_argument);
}
