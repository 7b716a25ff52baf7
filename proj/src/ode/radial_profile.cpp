#include "expanderlab/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expanderlab::ode {

double BarrierSpec::upper_constant() const {
    if (dimension < 2) throw std::domain_error("BarrierSpec::upper_constant: need dimension >= 2");
    return dimension == 2 ? 2.0 + 2.0 * cone_slope
                          : static_cast<double>(dimension - 1) * cone_slope;
}

double BarrierSpec::line_constant() const {
    return 2.0 * std::exp(1.0) * std::max(cone_slope, 2.0);
}

namespace {

void check_index(const RadialProfile& p, std::size_t i) {
    if (i >= p.size()) throw std::out_of_range("profile node index out of range");
    if (p.values.size() != p.grid.size())
        throw std::invalid_argument("profile: values/grid size mismatch");
}

} // namespace

double profile_derivative(const RadialProfile& p, std::size_t i) {
    check_index(p, i);
    const auto& u = p.values;
    const std::size_t last = u.size() - 1;
    if (i == 0) return 0.0; // even symmetry at the axis
    if (i == last) {
        const double h = p.grid.spacing(last - 1);
        return (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * h);
    }
    return (u[i + 1] - u[i - 1]) / (p.grid[i + 1] - p.grid[i - 1]);
}

double profile_second_derivative(const RadialProfile& p, std::size_t i) {
    check_index(p, i);
    const auto& u = p.values;
    const std::size_t last = u.size() - 1;
    const double h = p.grid.spacing(0);
    if (i == 0) return 2.0 * (u[1] - u[0]) / (h * h); // ghost node u(-h) = u(h)
    if (i == last)
        return (2.0 * u[last] - 5.0 * u[last - 1] + 4.0 * u[last - 2] - u[last - 3]) / (h * h);
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
}

double profile_mean_curvature(const RadialProfile& p, std::size_t i) {
    check_index(p, i);
    const double urr = profile_second_derivative(p, i);
    if (i == 0) return static_cast<double>(p.dimension) * urr;
    const double r = p.grid[i];
    const double ur = profile_derivative(p, i);
    const double W = std::sqrt(1.0 + ur * ur);
    return urr / (W * W * W) + static_cast<double>(p.dimension - 1) * ur / (r * W);
}

double profile_shape_norm_sq(const RadialProfile& p, std::size_t i) {
    check_index(p, i);
    const double urr = profile_second_derivative(p, i);
    if (i == 0) {
        // both principal curvatures equal u_rr(0) in the radial limit
        return static_cast<double>(p.dimension) * urr * urr;
    }
    const double r = p.grid[i];
    const double ur = profile_derivative(p, i);
    const double W = std::sqrt(1.0 + ur * ur);
    const double k1 = urr / (W * W * W);
    const double k2 = ur / (r * W);
    return k1 * k1 + static_cast<double>(p.dimension - 1) * k2 * k2;
}

double profile_laplace_beltrami(const RadialProfile& p, std::span<const double> field,
                                std::size_t i) {
    check_index(p, i);
    if (field.size() != p.size())
        throw std::invalid_argument("profile_laplace_beltrami: field/grid size mismatch");
    if (i == 0 || i + 1 >= p.size())
        throw std::out_of_range("profile_laplace_beltrami: interior nodes only");
    const double h = p.grid.spacing(0);
    const double nd = static_cast<double>(p.dimension);
    const auto weight = [&](std::size_t j) {
        const double ur = profile_derivative(p, j);
        return std::pow(p.grid[j], nd - 1.0) / std::sqrt(1.0 + ur * ur);
    };
    const double Pm = weight(i - 1), Pi = weight(i), Pp = weight(i + 1);
    const double ur = profile_derivative(p, i);
    const double Wi = std::sqrt(1.0 + ur * ur);
    return (0.5 * (Pp + Pi) * (field[i + 1] - field[i])
          - 0.5 * (Pi + Pm) * (field[i] - field[i - 1]))
         / (h * h * Wi * std::pow(p.grid[i], nd - 1.0));
}

namespace {

// 4-point Lagrange evaluation; returns value or derivative of the cubic.
double lagrange4(const num::Grid1D& g, const std::vector<double>& u, double x, bool derivative) {
    const std::size_t n = g.size();
    std::size_t i1 = g.interval_of(x);
    std::size_t i0 = (i1 == 0) ? 0 : std::min(i1 - 1, n - 4);
    double result = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        const double xa = g[i0 + a];
        if (!derivative) {
            double basis = 1.0;
            for (std::size_t b = 0; b < 4; ++b) {
                if (b == a) continue;
                basis *= (x - g[i0 + b]) / (xa - g[i0 + b]);
            }
            result += u[i0 + a] * basis;
        } else {
            double dbasis = 0.0;
            for (std::size_t c = 0; c < 4; ++c) {
                if (c == a) continue;
                double term = 1.0 / (xa - g[i0 + c]);
                for (std::size_t b = 0; b < 4; ++b) {
                    if (b == a || b == c) continue;
                    term *= (x - g[i0 + b]) / (xa - g[i0 + b]);
                }
                dbasis += term;
            }
            result += u[i0 + a] * dbasis;
        }
    }
    return result;
}

} // namespace

double profile_interpolate(const RadialProfile& p, double r) {
    if (p.size() < 4) throw std::invalid_argument("profile_interpolate: need >= 4 nodes");
    return lagrange4(p.grid, p.values, r, false);
}

double profile_interpolate_derivative(const RadialProfile& p, double r) {
    if (p.size() < 4) throw std::invalid_argument("profile_interpolate: need >= 4 nodes");
    return lagrange4(p.grid, p.values, r, true);
}

} // namespace expanderlab::ode
