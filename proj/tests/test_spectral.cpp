#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "expanderlab/spectral.hpp"

#include <cmath>

using namespace expanderlab;

TEST_CASE("closed-form stability values match independent evaluations") {
    // gamma-function expressions evaluated with 50-digit arithmetic
    CHECK(spectral::stability_closed_form(3, -0.25, 0.05) ==
          doctest::Approx(3.67790053217363658172).epsilon(1e-14));
    CHECK(spectral::stability_closed_form(5, -2.25, 0.1) ==
          doctest::Approx(4.972308542889142241011).epsilon(1e-14));
    CHECK(spectral::stability_closed_form(7, -6.0, 0.2) ==
          doctest::Approx(7.54177997090500207252).epsilon(1e-14));
    // exponent 1 collapses to an exact rational value at (3, -0.25)
    CHECK(spectral::stability_closed_form(3, -0.25, 1.0) ==
          doctest::Approx(16.0).epsilon(1e-13));
}

TEST_CASE("closed form diverges to minus infinity exactly in the unstable regime") {
    // lambda1 + (n-2)^2/4 < 0: the epsilon -> 0 limit is -inf, so small
    // exponents give large negative values
    CHECK(spectral::stability_closed_form(3, -0.3, 1e-4) < -100.0);
    // boundary case lambda1 = -(n-2)^2/4: finite limit (n+4)/2
    CHECK(spectral::stability_closed_form(3, -0.25, 1e-6) ==
          doctest::Approx(3.5).epsilon(1e-4));
    CHECK(spectral::stability_closed_form(6, -4.0, 1e-6) ==
          doctest::Approx(5.0).epsilon(1e-4));
    // strictly stable: stays positive
    CHECK(spectral::stability_closed_form(7, -1.0, 1e-4) > 0.0);
}

TEST_CASE("family quadrature approaches the closed form as the cutoff shrinks") {
    spectral::StabilityParams params;
    params.dimension = 3;
    params.lambda1 = -0.25;
    params.exponent = 1.0;  // fast convergence: gap ~ cutoff^2
    params.inner_cutoff = 1e-3;
    params.outer_cutoff = 30.0;
    const auto quadrature = spectral::stability_family_quadrature(params);
    // frozen relative gap 7.03e-8 at exponent 1
    CHECK(std::abs(quadrature.value - 16.0) / 16.0 <= 1e-5);
    CHECK(quadrature.error_estimate <= 1e-6);
}

TEST_CASE("family quadrature frozen values at the small test exponents") {
    struct Case {
        int n;
        double lambda1;
        double exponent;
        double frozen;
    };
    const Case cases[] = {{3, -0.25, 0.05, 4.479799719925148},
                          {5, -2.25, 0.1, 5.458201322399822},
                          {7, -6.0, 0.2, 7.650000347678434}};
    for (const auto& c : cases) {
        spectral::StabilityParams params;
        params.dimension = c.n;
        params.lambda1 = c.lambda1;
        params.exponent = c.exponent;
        params.inner_cutoff = 1e-3;
        params.outer_cutoff = 30.0;
        const auto quadrature = spectral::stability_family_quadrature(params);
        CHECK(quadrature.value == doctest::Approx(c.frozen).epsilon(1e-9));
    }
}

TEST_CASE("product-sphere eigendata and the stability flip at k = 3") {
    for (int k = 1; k <= 5; ++k) {
        const auto data = spectral::product_sphere_eigendata(k, k);
        CHECK(data.dimension == 2 * k + 1);
        CHECK(data.lambda1 == doctest::Approx(-2.0 * k));
        CHECK(data.shape_norm_sq == doctest::Approx(2.0 * k));
        const bool stable =
            spectral::classify_cone(data) == spectral::ConeStability::stable;
        CHECK(stable == (k >= 3));
    }
    // asymmetric factors: n = p+q+1, lambda1 = -(n-1)
    const auto data = spectral::product_sphere_eigendata(2, 4);
    CHECK(data.dimension == 7);
    CHECK(data.lambda1 == doctest::Approx(-6.0));
}

TEST_CASE("classification counts the borderline eigenvalue as unstable") {
    CHECK(spectral::classify_cone({4, -1.0, 0.0}) == spectral::ConeStability::unstable);
    CHECK(spectral::classify_cone({4, -0.99, 0.0}) == spectral::ConeStability::stable);
}

TEST_CASE("jacobi identities converge at second order in the stencil width") {
    struct Power {
        int n;
        double tau;
        double r;
    };
    for (const Power& c : {Power{3, 0.5, 2.0}, Power{5, 2.0, 5.0}, Power{7, 3.5, 6.0}}) {
        const double coarse = spectral::jacobi_power_identity_residual(c.n, c.tau, c.r, 2e-3);
        const double fine = spectral::jacobi_power_identity_residual(c.n, c.tau, c.r, 1e-3);
        CHECK(fine <= 1e-5);
        CHECK(std::log2(coarse / fine) >= 1.9);
    }
    struct Affine {
        int n;
        double t;
        double s;
        double r;
    };
    for (const Affine& c : {Affine{3, 1.0, 0.5, 4.0}, Affine{7, -2.0, 0.3, 6.0}}) {
        const double coarse =
            spectral::jacobi_affine_identity_residual(c.n, c.t, c.s, c.r, 2e-3);
        const double fine = spectral::jacobi_affine_identity_residual(c.n, c.t, c.s, c.r, 1e-3);
        CHECK(fine <= 1e-5);
        CHECK(std::log2(coarse / fine) >= 1.9);
    }
}
