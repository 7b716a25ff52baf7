#pragma once

#include <string>
#include <variant>
#include <vector>

namespace expanderlab::density {

/// A hyperplane through the origin in R^{n+1}, viewed as the trivial cone
/// of dimension n.
struct Hyperplane {
    int dimension = 3;  // n >= 1
};

/// The rotational cone {x_{n+1} = slope * |x|, x in R^n}. Its unit link is
/// a round (n-1)-sphere of radius 1/sqrt(1+slope^2).
struct RotationalCone {
    int dimension = 3;   // n >= 2
    double slope = 1.0;  // >= 0; 0 degenerates to the hyperplane
};

/// The cone over S^p(sqrt(p/(p+q))) x S^q(sqrt(q/(p+q))), the minimal
/// product of spheres in S^{p+q+1}. Cone dimension n = p+q+1. p = q = k is
/// the classical family whose density decreases to sqrt(2).
struct ProductSphereCone {
    int p = 1;
    int q = 1;
};

using ConeSpec = std::variant<Hyperplane, RotationalCone, ProductSphereCone>;

int cone_dimension(const ConeSpec& spec);                  // n
int ambient_dimension(const ConeSpec& spec);               // n + 1

/// log of the (n-1)-volume of the link C intersect the unit sphere.
/// Closed forms throughout; log space so huge product-sphere factors stay
/// representable.
double log_cross_section_volume(const ConeSpec& spec);
double cross_section_volume(const ConeSpec& spec);

/// Density Theta(C) = Vol(link) / (n * omega_n). Hyperplanes give exactly 1,
/// the rotational cone gives (1+slope^2)^{-(n-1)/2}.
double cone_density(const ConeSpec& spec);

/// Independent route for the rotational cone: integrate the latitude-sphere
/// volumes over the polar angle of the link instead of using the closed
/// form. Agrees with cone_density to quadrature accuracy; its slope -> 0
/// limit is 1.
double rotational_density_quadrature(int dimension, double slope);

/// Entropy of the shrinking round k-sphere,
///   d_k = (k/2e)^{k/2} * 2 sqrt(pi) / Gamma((k+1)/2),
/// evaluated in log space (direct evaluation overflows near k ~ 600).
/// Strictly decreasing in k with limit sqrt(2); d_1 = sqrt(2 pi / e).
double sphere_shrinker_entropy(int k);

/// Two-route check of the Gaussian-weighted cone integral
///   int_C (4 pi)^{-n/2} e^{-|z|^2/4} dz
///     = Vol(link) * int_0^inf (4 pi)^{-n/2} e^{-s^2/4} s^{n-1} ds
/// against the closed-form density. The radial factor is done by
/// quadrature; the link volume by closed form.
struct GaussianIdentityReport {
    double quadrature_value = 0.0;  // left side via radial quadrature
    double closed_form = 0.0;       // cone_density(spec)
    double difference = 0.0;
    double tolerance = 0.0;
    double error_estimate = 0.0;    // quadrature's own estimate
    bool holds = false;
    std::string detail;             // set when quadrature itself failed
};

GaussianIdentityReport gaussian_density_identity(const ConeSpec& spec, double tol = 1e-8);

/// One row of the sqrt(2) comparison: the product-sphere cone density and
/// the sphere-shrinker entropy, with their gaps above sqrt(2).
struct Sqrt2Row {
    int k = 0;
    double simons_density = 0.0;    // Theta(C_{k,k})
    double shrinker_entropy = 0.0;  // d_k
    double entropy_gap = 0.0;       // d_k - sqrt(2)
    double density_gap = 0.0;       // Theta - sqrt(2)
};

struct Sqrt2Table {
    std::vector<Sqrt2Row> rows;
    bool densities_exceed_sqrt2 = false;
    bool entropies_strictly_decreasing = false;
    bool densities_strictly_decreasing = false;
    std::string failure_detail;
    bool certified() const {
        return densities_exceed_sqrt2 && entropies_strictly_decreasing &&
               densities_strictly_decreasing;
    }
};

/// Rows k = 1..k_max (k_max >= 3) with the certification flags filled in.
/// Both columns decrease strictly toward sqrt(2) and stay above it.
Sqrt2Table sqrt2_comparison_table(int k_max);

} // namespace expanderlab::density
