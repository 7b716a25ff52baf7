#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/grid.hpp"
#include "expanderlab/newton.hpp"
#include "expanderlab/quadrature.hpp"
#include "expanderlab/radial_profile.hpp"
#include "expanderlab/special_functions.hpp"
#include "expanderlab/tridiagonal.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace expanderlab;

TEST_CASE("uniform grid covers the interval with equal spacing") {
    const auto g = num::Grid1D::uniform(0.0, 2.0, 401);
    CHECK(g.size() == 401);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 2.0);
    CHECK(g.is_uniform());
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
        CHECK(g.spacing(i) == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(g.interval_of(0.0) == 0);
    CHECK(g.interval_of(1.0) == 200);
    CHECK(g.interval_of(2.0) == 399);  // clamped to the last interval
}

TEST_CASE("tridiagonal solver reproduces a known solution") {
    // system: -u_{i-1} + 4 u_i - u_{i+1} = b_i with u = (1, 2, 3, 4)
    const std::vector<double> u_exact = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> lower = {-1.0, -1.0, -1.0};
    const std::vector<double> diag = {4.0, 4.0, 4.0, 4.0};
    const std::vector<double> upper = {-1.0, -1.0, -1.0};
    std::vector<double> rhs(4);
    rhs[0] = 4.0 * u_exact[0] - u_exact[1];
    rhs[3] = 4.0 * u_exact[3] - u_exact[2];
    for (int i = 1; i < 3; ++i)
        rhs[i] = -u_exact[i - 1] + 4.0 * u_exact[i] - u_exact[i + 1];
    const auto u = num::solve_tridiagonal(lower, diag, upper, rhs);
    for (int i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(u_exact[i]).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature hits polynomial and Gaussian integrals") {
    const auto cubic = num::integrate([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12);
    CHECK(cubic.value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(cubic.error_estimate <= 1e-10);

    // int_0^8 e^{-x^2/4} dx = sqrt(pi) erf(4)
    const auto gauss =
        num::integrate([](double x) { return std::exp(-0.25 * x * x); }, 0.0, 8.0, 1e-12);
    CHECK(gauss.value ==
          doctest::Approx(std::sqrt(std::numbers::pi) * std::erf(4.0)).epsilon(1e-11));
}

TEST_CASE("gaussian tail cutoff suppresses the weight below tolerance") {
    const double cutoff = num::gaussian_tail_cutoff(1e-12);
    CHECK(std::exp(-0.25 * cutoff * cutoff) <= 1e-12);
    CHECK(cutoff < 30.0);
}

TEST_CASE("gamma function matches classical values") {
    CHECK(num::gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(num::gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK(num::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(num::log_gamma(10.5) ==
          doctest::Approx(std::log(num::gamma_fn(10.5))).epsilon(1e-13));
}

TEST_CASE("unit ball and sphere volumes") {
    CHECK(num::unit_ball_volume(2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(num::unit_ball_volume(3) ==
          doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
    CHECK(num::sphere_volume(1, 1.0) ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(num::sphere_volume(2, 2.0) ==
          doctest::Approx(16.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(num::log_sphere_volume(2, 1.0) ==
          doctest::Approx(std::log(4.0 * std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("damped newton solves a stiff scalar fixed point") {
    std::vector<double> x = {10.0};
    const auto report = num::newton_damped(
        x, [](const std::vector<double>& v) { return std::vector<double>{v[0] * v[0] - 2.0}; },
        [](const std::vector<double>& v, const std::vector<double>& f) {
            return std::vector<double>{f[0] / (2.0 * v[0])};
        });
    CHECK(report.converged);
    CHECK(x[0] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-12));
}

TEST_CASE("profile curvature helpers match the rotational closed forms") {
    // exact cone u = kappa r: principal curvatures 0 and kappa/(r sqrt(1+kappa^2))
    ode::RadialProfile cone;
    cone.dimension = 4;
    cone.cone_slope = 0.5;
    cone.grid = num::Grid1D::uniform(0.0, 5.0, 2001);
    cone.values.resize(cone.size());
    for (std::size_t i = 0; i < cone.size(); ++i) cone.values[i] = 0.5 * cone.grid[i];

    const std::size_t i = 800;  // r = 2
    const double r = cone.grid[i];
    const double w = std::sqrt(1.0 + 0.25);
    CHECK(ode::profile_derivative(cone, i) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(ode::profile_second_derivative(cone, i) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(ode::profile_mean_curvature(cone, i) ==
          doctest::Approx(3.0 * 0.5 / (r * w)).epsilon(1e-9));
    CHECK(ode::profile_shape_norm_sq(cone, i) ==
          doctest::Approx(3.0 * 0.25 / (r * r * w * w)).epsilon(1e-8));
}

TEST_CASE("interpolation is exact on linear profiles and differentiable") {
    ode::RadialProfile line;
    line.dimension = 2;
    line.cone_slope = 2.0;
    line.grid = num::Grid1D::uniform(0.0, 3.0, 31);
    line.values.resize(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) line.values[i] = 2.0 * line.grid[i] + 1.0;
    CHECK(ode::profile_interpolate(line, 1.234) == doctest::Approx(3.468).epsilon(1e-14));
    CHECK(ode::profile_interpolate_derivative(line, 1.234) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(ode::profile_interpolate(line, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ode::profile_interpolate(line, 3.0) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("laplace-beltrami of a radial field on the flat plane") {
    // flat graph: operator reduces to f'' + (n-1) f'/r; take f = r^2 in n = 3
    ode::RadialProfile flat;
    flat.dimension = 3;
    flat.cone_slope = 0.0;
    flat.grid = num::Grid1D::uniform(0.0, 4.0, 1601);
    flat.values.assign(flat.size(), 0.0);
    std::vector<double> field(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i)
        field[i] = flat.grid[i] * flat.grid[i];
    const std::size_t i = 800;  // r = 2
    CHECK(ode::profile_laplace_beltrami(flat, field, i) == doctest::Approx(6.0).epsilon(1e-8));
}
