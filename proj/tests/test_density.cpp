#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/density.hpp"

#include <cmath>
#include <numbers>

using namespace expanderlab;

TEST_CASE("sphere shrinker entropies: closed values and the sqrt(2) tail") {
    // d_1 = sqrt(2 pi / e)
    CHECK(density::sphere_shrinker_entropy(1) ==
          doctest::Approx(std::sqrt(2.0 * std::numbers::pi / std::numbers::e))
              .epsilon(1e-15));
    CHECK(density::sphere_shrinker_entropy(1) == doctest::Approx(1.5203).epsilon(1e-4));
    // frozen tail gap d_200 - sqrt(2) = 5.893749909863682e-4
    CHECK(density::sphere_shrinker_entropy(200) - std::numbers::sqrt2 ==
          doctest::Approx(5.893749909863682e-4).epsilon(1e-10));
    double previous = density::sphere_shrinker_entropy(1);
    for (int k = 2; k <= 60; ++k) {
        const double d = density::sphere_shrinker_entropy(k);
        CHECK(d < previous);
        CHECK(d > std::numbers::sqrt2);
        previous = d;
    }
}

TEST_CASE("product-cone densities match the classical closed forms") {
    CHECK(density::cone_density(density::ProductSphereCone{1, 1}) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
    CHECK(density::cone_density(density::ProductSphereCone{2, 2}) ==
          doctest::Approx(1.5).epsilon(1e-14));
    CHECK(density::cone_density(density::ProductSphereCone{3, 3}) ==
          doctest::Approx(15.0 * std::numbers::pi / 32.0).epsilon(1e-14));
}

TEST_CASE("hyperplane density is one and the rotational cone interpolates") {
    CHECK(density::cone_density(density::Hyperplane{3}) == doctest::Approx(1.0));
    // rotational cone of slope 0 is the hyperplane
    CHECK(density::cone_density(density::RotationalCone{3, 0.0}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // link is a sphere of radius (1+slope^2)^{-1/2}, so the ratio shrinks
    // as the cone steepens
    const double shallow = density::cone_density(density::RotationalCone{3, 0.5});
    const double steep = density::cone_density(density::RotationalCone{3, 2.0});
    CHECK(density::cone_density(density::RotationalCone{3, 1.0}) ==
          doctest::Approx(std::pow(2.0, -1.0)).epsilon(1e-14));
    CHECK(shallow < 1.0);
    CHECK(steep < shallow);
}

TEST_CASE("gaussian quadrature identity certifies the density") {
    for (const density::ConeSpec& spec :
         {density::ConeSpec(density::ProductSphereCone{1, 1}),
          density::ConeSpec(density::ProductSphereCone{3, 3}),
          density::ConeSpec(density::RotationalCone{3, 1.0}),
          density::ConeSpec(density::Hyperplane{4})}) {
        const auto report = density::gaussian_density_identity(spec, 1e-8);
        CHECK(report.holds);
        CHECK(std::abs(report.difference) <= 1e-8);
        CHECK(report.quadrature_value ==
              doctest::Approx(report.closed_form).epsilon(1e-10));
    }
}

TEST_CASE("rotational density quadrature agrees with the cone density") {
    const double direct = density::cone_density(density::RotationalCone{3, 1.0});
    CHECK(density::rotational_density_quadrature(3, 1.0) ==
          doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("cone and ambient dimensions") {
    CHECK(density::cone_dimension(density::ProductSphereCone{2, 2}) == 5);
    CHECK(density::ambient_dimension(density::ProductSphereCone{2, 2}) == 6);
    CHECK(density::cone_dimension(density::Hyperplane{4}) == 4);
    CHECK(density::cone_dimension(density::RotationalCone{3, 1.0}) == 3);
}

TEST_CASE("comparison table certifies both monotone chains above sqrt(2)") {
    const auto table = density::sqrt2_comparison_table(12);
    CHECK(table.certified());
    CHECK(table.rows.size() == 12);
    CHECK(table.rows.front().k == 1);
    CHECK(table.rows.front().simons_density ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
    for (const auto& row : table.rows) {
        CHECK(row.density_gap > 0.0);
        CHECK(row.entropy_gap > 0.0);
        CHECK(row.simons_density - std::numbers::sqrt2 ==
              doctest::Approx(row.density_gap).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)density::sqrt2_comparison_table(2), std::invalid_argument);
}
