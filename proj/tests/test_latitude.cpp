#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/latitude_band.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

using namespace expanderlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_value(const graph::LatitudeField& field) {
    return *std::min_element(field.values.begin(), field.values.end());
}

} // namespace

TEST_CASE("band solves certify sign, boundary, and residual") {
    for (const double eps : {0.25, 0.5, 1.0, kInf}) {
        const auto field = graph::solve_latitude_band(eps, 1.3, 1.7, 2, 2001);
        CHECK(field.residual_sup <= 1e-8);
        CHECK(graph::latitude_band_residual(field) <= 1e-8);
        CHECK(field.values.front() == 0.0);
        CHECK(field.values.back() == 0.0);
        CHECK(min_value(field) < 0.0);
        for (const double v : field.values) CHECK(v <= 0.0);
    }
}

TEST_CASE("frozen band depths on [1.3, 1.7]") {
    CHECK(min_value(graph::solve_latitude_band(0.25, 1.3, 1.7, 2, 2001)) ==
          doctest::Approx(-0.280453).epsilon(1e-4));
    CHECK(min_value(graph::solve_latitude_band(0.5, 1.3, 1.7, 2, 2001)) ==
          doctest::Approx(-0.083905).epsilon(1e-4));
    CHECK(min_value(graph::solve_latitude_band(1.0, 1.3, 1.7, 2, 2001)) ==
          doctest::Approx(-0.051706).epsilon(1e-4));
    CHECK(min_value(graph::solve_latitude_band(1e3, 1.3, 1.7, 2, 2001)) ==
          doctest::Approx(-0.041424).epsilon(1e-4));
    CHECK(min_value(graph::solve_latitude_band(0.5, 1.3, 1.7, 3, 2001)) ==
          doctest::Approx(-0.113921).epsilon(1e-4));
}

TEST_CASE("solutions deepen pointwise as the weight strengthens") {
    const auto tight = graph::solve_latitude_band(0.25, 1.3, 1.7, 2, 1001);
    const auto mid = graph::solve_latitude_band(0.5, 1.3, 1.7, 2, 1001);
    const auto loose = graph::solve_latitude_band(1e3, 1.3, 1.7, 2, 1001);
    const auto unweighted = graph::solve_latitude_band(kInf, 1.3, 1.7, 2, 1001);
    for (std::size_t i = 0; i < tight.values.size(); ++i) {
        CHECK(tight.values[i] <= mid.values[i] + 1e-12);
        CHECK(mid.values[i] <= loose.values[i] + 1e-12);
        CHECK(loose.values[i] <= unweighted.values[i] + 1e-12);
    }
    // at eps = 1e3 the weight term is O(1e-6); the unweighted limit is close
    double gap = 0.0;
    for (std::size_t i = 0; i < loose.values.size(); ++i)
        gap = std::max(gap, unweighted.values[i] - loose.values[i]);
    CHECK(gap <= 1e-6);
}

TEST_CASE("wider bands lie below narrower ones on the common angles") {
    // grids align: 1.35 = 1.3 + 250 * 0.0002
    const auto outer = graph::solve_latitude_band(0.5, 1.3, 1.7, 2, 2001);
    const auto inner = graph::solve_latitude_band(0.5, 1.35, 1.65, 2, 1501);
    for (std::size_t i = 0; i < inner.values.size(); ++i)
        CHECK(outer.values[i + 250] <= inner.values[i] + 1e-9);
}

TEST_CASE("narrow equatorial bands follow the parabolic depth law") {
    // v'' ~ n near theta = pi/2, so depth ~ (n/2) w^2 for half-width w
    const double w = 0.02;
    const double mid = std::numbers::pi / 2.0;
    for (const int n : {2, 3}) {
        const auto field = graph::solve_latitude_band(kInf, mid - w, mid + w, n, 801);
        CHECK(min_value(field) ==
              doctest::Approx(-0.5 * n * w * w).epsilon(1e-2));
    }
}

TEST_CASE("grid refinement is settled at the working resolution") {
    const double coarse = min_value(graph::solve_latitude_band(0.5, 1.3, 1.7, 2, 1001));
    const double fine = min_value(graph::solve_latitude_band(0.5, 1.3, 1.7, 2, 2001));
    CHECK(std::abs(coarse - fine) <= 1e-6);
}

TEST_CASE("invalid bands and grids are rejected") {
    CHECK_THROWS_AS((void)graph::solve_latitude_band(1.0, 1.7, 1.3, 2, 101),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)graph::solve_latitude_band(1.0, 1.3, 3.5, 2, 101),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)graph::solve_latitude_band(1.0, -0.1, 1.7, 2, 101),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)graph::solve_latitude_band(1.0, 1.3, 1.7, 2, 3),
                    std::invalid_argument);
}
