#include "expanderlab/density.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/quadrature.hpp"
#include "expanderlab/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace expanderlab::density {

namespace {

void validate(const ConeSpec& spec) {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Hyperplane>) {
                if (c.dimension < 1)
                    throw std::invalid_argument("hyperplane: dimension must be >= 1");
            } else if constexpr (std::is_same_v<T, RotationalCone>) {
                if (c.dimension < 2)
                    throw std::invalid_argument("rotational cone: dimension must be >= 2");
                if (!(c.slope >= 0.0))
                    throw std::invalid_argument("rotational cone: slope must be >= 0");
            } else {
                if (c.p < 1 || c.q < 1)
                    throw std::invalid_argument("product sphere cone: both factors need dimension >= 1");
            }
        },
        spec);
}

} // namespace

int cone_dimension(const ConeSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& c) -> int {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, ProductSphereCone>) return c.p + c.q + 1;
            else return c.dimension;
        },
        spec);
}

int ambient_dimension(const ConeSpec& spec) { return cone_dimension(spec) + 1; }

double log_cross_section_volume(const ConeSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Hyperplane>) {
                return num::log_sphere_volume(c.dimension - 1, 1.0);
            } else if constexpr (std::is_same_v<T, RotationalCone>) {
                const double link_radius = 1.0 / std::sqrt(1.0 + c.slope * c.slope);
                return num::log_sphere_volume(c.dimension - 1, link_radius);
            } else {
                const double total = c.p + c.q;
                return num::log_sphere_volume(c.p, std::sqrt(c.p / total)) +
                       num::log_sphere_volume(c.q, std::sqrt(c.q / total));
            }
        },
        spec);
}

double cross_section_volume(const ConeSpec& spec) {
    return std::exp(log_cross_section_volume(spec));
}

double cone_density(const ConeSpec& spec) {
    // n * omega_n is exactly the volume of the unit (n-1)-sphere, so the
    // density is a single log difference; hyperplanes cancel to exactly 1.
    const int n = cone_dimension(spec);
    return std::exp(log_cross_section_volume(spec) - num::log_sphere_volume(n - 1, 1.0));
}

double rotational_density_quadrature(int dimension, double slope) {
    const RotationalCone cone{dimension, slope};
    validate(ConeSpec{cone});
    const int n = dimension;
    const double link_radius = 1.0 / std::sqrt(1.0 + slope * slope);
    // Slice the link (n-1)-sphere into latitude (n-2)-spheres of radius
    // link_radius * sin(alpha); the slice arc length element is link_radius.
    auto slice = [&](double alpha) {
        return num::sphere_volume(n - 2, link_radius * std::sin(alpha)) * link_radius;
    };
    const num::QuadratureResult q =
        num::integrate(slice, 0.0, std::acos(-1.0), 1e-12);
    return q.value / num::sphere_volume(n - 1, 1.0);
}

double sphere_shrinker_entropy(int k) {
    if (k < 1) throw std::invalid_argument("shrinker entropy: k must be >= 1");
    const double kd = k;
    const double log_value = 0.5 * kd * (std::log(kd) - std::log(2.0) - 1.0) +
                             std::log(2.0) + 0.5 * std::log(std::acos(-1.0)) -
                             num::log_gamma(0.5 * (kd + 1.0));
    return std::exp(log_value);
}

GaussianIdentityReport gaussian_density_identity(const ConeSpec& spec, double tol) {
    GaussianIdentityReport report;
    report.tolerance = tol;
    report.closed_form = cone_density(spec);

    const int n = cone_dimension(spec);
    const double log_link = log_cross_section_volume(spec);
    // exp-of-sum keeps the integrand representable even when the weight
    // (4 pi)^{-n/2} or the power s^{n-1} is individually out of range.
    auto radial = [&](double s) {
        return std::exp(-0.5 * n * std::log(4.0 * std::acos(-1.0)) - 0.25 * s * s +
                        (n - 1.0) * std::log(s));
    };
    try {
        const num::QuadratureResult q = num::integrate(
            radial, 0.0, std::numeric_limits<double>::infinity(), tol * 1e-2);
        report.quadrature_value = std::exp(log_link) * q.value;
        report.error_estimate = std::exp(log_link) * q.error_estimate;
        report.difference = std::abs(report.quadrature_value - report.closed_form);
        report.holds = report.difference <= tol;
    } catch (const QuadratureError& e) {
        report.quadrature_value = e.best_estimate();
        report.holds = false;
        report.detail = e.what();
    }
    return report;
}

Sqrt2Table sqrt2_comparison_table(int k_max) {
    if (k_max < 3) throw std::invalid_argument("sqrt2 table: k_max must be >= 3");
    Sqrt2Table table;
    const double root2 = std::sqrt(2.0);
    table.rows.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        Sqrt2Row row;
        row.k = k;
        row.simons_density = cone_density(ProductSphereCone{k, k});
        row.shrinker_entropy = sphere_shrinker_entropy(k);
        row.entropy_gap = row.shrinker_entropy - root2;
        row.density_gap = row.simons_density - root2;
        table.rows.push_back(row);
    }

    table.densities_exceed_sqrt2 = true;
    table.entropies_strictly_decreasing = true;
    table.densities_strictly_decreasing = true;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const Sqrt2Row& row = table.rows[i];
        if (!(row.density_gap > 0.0)) {
            table.densities_exceed_sqrt2 = false;
            table.failure_detail = "density at k=" + std::to_string(row.k) + " not above sqrt(2)";
        }
        if (i > 0 && !(row.shrinker_entropy < table.rows[i - 1].shrinker_entropy)) {
            table.entropies_strictly_decreasing = false;
            table.failure_detail = "entropy not decreasing at k=" + std::to_string(row.k);
        }
        if (i > 0 && !(row.simons_density < table.rows[i - 1].simons_density)) {
            table.densities_strictly_decreasing = false;
            table.failure_detail = "density not decreasing at k=" + std::to_string(row.k);
        }
    }
    return table;
}

} // namespace expanderlab::density
