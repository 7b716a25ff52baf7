#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/errors.hpp"
#include "expanderlab/translator.hpp"

#include <cmath>
#include <limits>

using namespace expanderlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("arrival-time closed form matches hand values") {
    flow::TranslatorParams params;  // d = 3, eps = 1, rho0 = 4
    // v(rho) = eps^2 [log(d-1 + rho0^2/(2 eps^2)) - log(d-1 + rho^2/(2 eps^2))]
    CHECK(flow::arrival_time_closed_form(params, 0.0) ==
          doctest::Approx(std::log(5.0)).epsilon(1e-15));
    CHECK(flow::arrival_time_closed_form(params, 4.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(flow::arrival_time_closed_form(params, 2.0) ==
          doctest::Approx(std::log(5.0) - std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("default translator solve meets its certificates") {
    flow::TranslatorParams params;
    const auto phi = flow::solve_translator(params, 2001);
    // frozen: phi(0) = 1.498240242372 at 2001 nodes, residual 1.398e-10
    CHECK(phi.values.front() == doctest::Approx(1.498240242372).epsilon(1e-9));
    CHECK(flow::translator_residual(phi, params) <= 1e-8);
    CHECK(flow::smean_identity_residual(phi, params) <= 1e-7);
    CHECK(flow::smean_curvature_max(phi, params) == doctest::Approx(-0.898851).epsilon(1e-4));
    // profile is nonnegative and radially nonincreasing (solver invariant)
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) {
        CHECK(phi.values[i] >= 0.0);
        CHECK(phi.values[i + 1] <= phi.values[i] + 1e-12);
    }
}

TEST_CASE("axis value converges under refinement") {
    flow::TranslatorParams params;
    const auto coarse = flow::solve_translator(params, 2001);
    const auto fine = flow::solve_translator(params, 4001);
    // frozen axis values 1.498240242372 -> 1.498240042814
    CHECK(std::abs(fine.values.front() - coarse.values.front()) <= 1e-6);
}

TEST_CASE("scaled solutions approach the arrival time as lambda grows") {
    flow::TranslatorParams params;
    const auto report = flow::arrival_time_limit(params, {10.0, 100.0, 1000.0}, 1001);
    CHECK(report.cauchy);
    CHECK(report.residuals_decreasing);
    REQUIRE(report.sup_differences.size() == 2);
    // frozen ladder: 1.638392e-02 -> 3.917759e-04
    CHECK(report.sup_differences[0] == doctest::Approx(1.638392e-02).epsilon(1e-3));
    CHECK(report.sup_differences[1] == doctest::Approx(3.917759e-04).epsilon(1e-3));
    CHECK(report.closed_form_gap <= 1e-4);  // frozen 5.2e-06
}

TEST_CASE("large lambda solve follows lambda times the arrival time") {
    flow::TranslatorParams params;
    params.lambda = 1000.0;
    const auto phi = flow::solve_translator(params, 2001);
    // frozen: phi(0) = 1609.432759 vs lambda v(0) = 1609.437912
    CHECK(phi.values.front() ==
          doctest::Approx(1000.0 * std::log(5.0)).epsilon(1e-5));
}

TEST_CASE("weak drift collapses toward the driftless problem") {
    flow::TranslatorParams params;
    params.lambda = 0.01;
    const auto phi = flow::solve_translator(params, 1001);
    // sup stays near lambda v(0) = 1.609e-2; frozen sup 1.486e-2
    CHECK(phi.values.front() <= 0.0161);
    CHECK(phi.values.front() >= 0.0140);
}

TEST_CASE("lambda zero forces the zero profile") {
    flow::TranslatorParams params;
    params.lambda = 0.0;
    const auto phi = flow::solve_translator(params, 501);
    for (double v : phi.values) CHECK(v == 0.0);
}

TEST_CASE("infinite epsilon drops the drift term") {
    flow::TranslatorParams params;
    params.epsilon = kInf;
    CHECK(params.drift_factor() == 0.0);
    params.lambda = 0.5;
    const auto phi = flow::solve_translator(params, 2001);
    CHECK(flow::translator_residual(phi, params) <= 1e-8);
    // frozen: inf-epsilon axis value 1.392192337 (limit of the continuation)
    CHECK(phi.values.front() == doctest::Approx(1.392192337).epsilon(1e-6));
}

TEST_CASE("epsilon continuation approaches the driftless profile like 1/eps^2") {
    flow::TranslatorParams driftless;
    driftless.epsilon = kInf;
    driftless.lambda = 0.5;
    const auto reference = flow::solve_translator(driftless, 1001);
    double previous_gap = std::numeric_limits<double>::infinity();
    for (double eps : {1.0, 3.0, 10.0}) {
        flow::TranslatorParams params;
        params.epsilon = eps;
        params.lambda = 0.5;
        const auto phi = flow::solve_translator(params, 1001);
        double gap = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i)
            gap = std::max(gap, std::abs(phi.values[i] - reference.values[i]));
        CHECK(gap < previous_gap);
        previous_gap = gap;
    }
    CHECK(previous_gap <= 2e-2);  // frozen gap 1.34e-2 at eps = 10
}

TEST_CASE("parameter validation rejects nonsense") {
    flow::TranslatorParams params;
    params.base_dimension = 1;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = {};
    params.epsilon = -1.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = {};
    params.lambda = -0.5;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = {};
    params.domain_radius = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)flow::arrival_time_limit({}, {10.0, 5.0, 100.0}, 101),
                    std::invalid_argument);
}
