#include "expanderlab/expander_ode.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/newton.hpp"
#include "expanderlab/quadrature.hpp"
#include "expanderlab/special_functions.hpp"
#include "expanderlab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace expanderlab::ode {

double radial_expander_residual(int dimension, double r, double h,
                                double um, double u0, double up) {
    const double d2 = (up - 2.0 * u0 + um) / (h * h);
    const double d1 = (up - um) / (2.0 * h);
    const double conv = (r > 0.0 ? static_cast<double>(dimension - 1) / r + 0.5 * r : 0.0);
    if (r == 0.0) {
        // symmetric limit: u''/(1+u'^2) + (n-1) u'/r -> n u'' when u'(0) = 0
        return static_cast<double>(dimension) * d2 - 0.5 * u0;
    }
    return d2 / (1.0 + d1 * d1) + conv * d1 - 0.5 * u0;
}

double radial_expander_residual(const RadialProfile& p, std::size_t i) {
    if (i == 0 || i + 1 >= p.size())
        throw std::invalid_argument("radial_expander_residual: boundary node (one-sided stencil not allowed)");
    const double h = p.grid.spacing(i - 1);
    return radial_expander_residual(p.dimension, p.grid[i], h,
                                    p.values[i - 1], p.values[i], p.values[i + 1]);
}

namespace {

// Shared Newton driver for the radial two-point problems. Rows:
//   row 0      : symmetry row  n * 2(u1-u0)/h^2 - u0/2      (axis == true)
//                or Dirichlet  u0 - left_value               (axis == false)
//   row N-1    : Dirichlet     u_{N-1} - right_value
//   interior i : quasilinear residual at r_i
struct RadialProblem {
    int dimension = 2;
    num::Grid1D grid = num::Grid1D::uniform(0.0, 1.0, 3);
    bool axis_row = true;    // even-symmetry row at node 0
    double left_value = 0.0; // used when axis_row == false
    double right_value = 0.0;
};

std::vector<double> problem_residual(const RadialProblem& prob, const std::vector<double>& u) {
    const std::size_t n = u.size();
    const double h = prob.grid.spacing(0);
    std::vector<double> f(n);
    if (prob.axis_row) {
        f[0] = static_cast<double>(prob.dimension) * 2.0 * (u[1] - u[0]) / (h * h) - 0.5 * u[0];
    } else {
        f[0] = u[0] - prob.left_value;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = prob.grid[i];
        const double conv = (prob.dimension > 1 ? static_cast<double>(prob.dimension - 1) / r : 0.0)
                          + 0.5 * r;
        const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        const double d1 = (u[i + 1] - u[i - 1]) / (2.0 * h);
        f[i] = d2 / (1.0 + d1 * d1) + conv * d1 - 0.5 * u[i];
    }
    f[n - 1] = u[n - 1] - prob.right_value;
    return f;
}

std::vector<double> problem_step(const RadialProblem& prob, const std::vector<double>& u,
                                 const std::vector<double>& f) {
    const std::size_t n = u.size();
    const double h = prob.grid.spacing(0);
    std::vector<double> lower(n - 1, 0.0), diag(n, 0.0), upper(n - 1, 0.0), rhs(n);
    if (prob.axis_row) {
        diag[0] = -2.0 * static_cast<double>(prob.dimension) / (h * h) - 0.5;
        upper[0] = 2.0 * static_cast<double>(prob.dimension) / (h * h);
    } else {
        diag[0] = 1.0;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = prob.grid[i];
        const double conv = (prob.dimension > 1 ? static_cast<double>(prob.dimension - 1) / r : 0.0)
                          + 0.5 * r;
        const double d2 = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (h * h);
        const double d1 = (u[i + 1] - u[i - 1]) / (2.0 * h);
        const double w2 = 1.0 + d1 * d1;
        const double dd1 = -d2 / (w2 * w2) * 2.0 * d1; // d residual / d (d1)
        diag[i] = -2.0 / (h * h * w2) - 0.5;
        upper[i] = 1.0 / (h * h * w2) + (dd1 + conv) / (2.0 * h);
        lower[i - 1] = 1.0 / (h * h * w2) - (dd1 + conv) / (2.0 * h);
    }
    diag[n - 1] = 1.0;
    std::vector<double> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -f[i];
    return num::solve_tridiagonal(lower, diag, upper, neg);
}

RadialProfile run_solver(RadialProblem prob, int dimension, double cone_slope,
                         std::vector<double> initial, const RadialSolveOptions& options) {
    std::vector<double> u = std::move(initial);
    num::NewtonOptions nopt;
    // Evaluating the second difference of values as large as the boundary
    // datum leaves rounding noise ~ eps * |u|_max / h^2 in the residual, so
    // the requested tolerance is unreachable on large domains. Converge at
    // that floor instead of iterating forever against rounding.
    const double h = prob.grid.spacing(0);
    const double umax = std::max(std::abs(u.front()), std::abs(u.back()));
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + umax) /
                         (h * h * (1.0 + cone_slope * cone_slope));
    nopt.tolerance = std::max(options.residual_tolerance, floor);
    nopt.max_iterations = options.max_iterations;
    auto report = num::newton_damped(
        u, [&](const std::vector<double>& v) { return problem_residual(prob, v); },
        [&](const std::vector<double>& v, const std::vector<double>& f) {
            return problem_step(prob, v, f);
        },
        nopt);
    if (!report.converged) {
        throw SolveError("radial expander solve did not converge", report.residual_norm,
                         report.iterations);
    }
    RadialProfile p;
    p.dimension = dimension;
    p.cone_slope = cone_slope;
    p.grid = prob.grid;
    p.values = std::move(u);
    return p;
}

void certify_profile(const RadialProfile& p, bool line_problem) {
    const BarrierSpec spec{p.dimension, p.cone_slope};
    const double slack = 1e-9;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        const double u = p.values[i];
        if (u < p.cone_slope * r - slack) {
            std::ostringstream msg;
            msg << "lower barrier violated at r = " << r << " (u - kr = " << u - p.cone_slope * r << ")";
            throw InvariantError(msg.str());
        }
        if (r >= 1.0) {
            const double upper = line_problem
                ? p.cone_slope * r + std::min((spec.line_constant() / r) * std::exp(-0.25 * r * r),
                                              3.0 * p.cone_slope + 2.0)
                : p.cone_slope * r + spec.upper_constant() / r;
            if (u > upper + slack) {
                std::ostringstream msg;
                msg << "upper barrier violated at r = " << r << " (excess = " << u - upper << ")";
                throw InvariantError(msg.str());
            }
        }
        if (i > 0 && p.values[i] < p.values[i - 1] - 1e-10) {
            std::ostringstream msg;
            msg << "monotonicity violated at r = " << r;
            throw InvariantError(msg.str());
        }
    }
}

} // namespace

RadialProfile solve_radial_expander(int dimension, double cone_slope, double R,
                                    std::size_t node_count, const RadialSolveOptions& options) {
    if (dimension < 2) throw std::invalid_argument("solve_radial_expander: need dimension >= 2");
    if (!(cone_slope > 0.0)) throw std::invalid_argument("solve_radial_expander: need cone_slope > 0");
    if (!(R >= 1.0)) throw std::invalid_argument("solve_radial_expander: need R >= 1");

    RadialProblem prob;
    prob.dimension = dimension;
    prob.grid = num::Grid1D::uniform(0.0, R, node_count);
    prob.right_value = cone_slope * R;
    std::vector<double> initial(node_count);
    for (std::size_t i = 0; i < node_count; ++i) initial[i] = cone_slope * prob.grid[i];
    RadialProfile p = run_solver(std::move(prob), dimension, cone_slope, std::move(initial), options);
    if (options.check_invariants) certify_profile(p, false);
    return p;
}

RadialProfile solve_expander_line(double cone_slope, double R, std::size_t node_count,
                                  const RadialSolveOptions& options) {
    if (!(cone_slope > 0.0)) throw std::invalid_argument("solve_expander_line: need cone_slope > 0");
    if (!(R >= 2.0)) throw std::invalid_argument("solve_expander_line: need R >= 2");

    RadialProblem prob;
    prob.dimension = 1;
    prob.grid = num::Grid1D::uniform(0.0, R, node_count);
    prob.right_value = cone_slope * R;
    std::vector<double> initial(node_count);
    for (std::size_t i = 0; i < node_count; ++i) initial[i] = cone_slope * prob.grid[i];
    RadialProfile p = run_solver(std::move(prob), 1, cone_slope, std::move(initial), options);
    if (options.check_invariants) certify_profile(p, true);
    return p;
}

std::vector<double> solve_expander_line_two_sided(double cone_slope, double R,
                                                  std::size_t node_count,
                                                  const RadialSolveOptions& options) {
    if (!(cone_slope > 0.0)) throw std::invalid_argument("two-sided solve: need cone_slope > 0");
    if (!(R >= 2.0)) throw std::invalid_argument("two-sided solve: need R >= 2");
    if (node_count % 2 == 0) throw std::invalid_argument("two-sided solve: need odd node count");

    RadialProblem prob;
    prob.dimension = 1;
    prob.grid = num::Grid1D::uniform(-R, R, node_count);
    prob.axis_row = false;
    prob.left_value = cone_slope * R;
    prob.right_value = cone_slope * R;
    std::vector<double> initial(node_count);
    for (std::size_t i = 0; i < node_count; ++i)
        initial[i] = cone_slope * std::abs(prob.grid[i]);
    RadialProfile p = run_solver(std::move(prob), 1, cone_slope, std::move(initial), options);
    return p.values;
}

EntireLimitReport entire_limit_bounds(int dimension, double cone_slope,
                                      const std::vector<double>& R_list, double spacing) {
    if (R_list.size() < 3) throw std::invalid_argument("entire_limit_bounds: need >= 3 radii");
    if (!std::is_sorted(R_list.begin(), R_list.end()))
        throw std::invalid_argument("entire_limit_bounds: radii must increase");
    if (!(R_list.back() >= 20.0))
        throw std::invalid_argument("entire_limit_bounds: largest radius must be >= 20");

    EntireLimitReport report;
    report.radii = R_list;
    std::vector<RadialProfile> profiles;
    profiles.reserve(R_list.size());
    for (double R : R_list) {
        const auto nodes = static_cast<std::size_t>(std::llround(R / spacing)) + 1;
        profiles.push_back(solve_radial_expander(dimension, cone_slope, R, nodes));
    }

    std::ostringstream detail;
    report.pointwise_monotone = true;
    for (std::size_t k = 0; k + 1 < profiles.size(); ++k) {
        const auto& small = profiles[k];
        const auto& large = profiles[k + 1];
        double sup = 0.0;
        for (std::size_t i = 0; i < small.size(); ++i) {
            // grids share the spacing and origin, so node i matches node i
            const double diff = large.values[i] - small.values[i];
            sup = std::max(sup, std::abs(diff));
            if (diff < -1e-10 && report.pointwise_monotone) {
                report.pointwise_monotone = false;
                detail << "monotone convergence fails at r = " << small.grid[i]
                       << " between R = " << small.outer_radius()
                       << " and R = " << large.outer_radius() << "; ";
            }
        }
        report.sup_differences.push_back(sup);
    }

    report.differences_decreasing = true;
    for (std::size_t k = 0; k + 1 < report.sup_differences.size(); ++k) {
        if (report.sup_differences[k + 1] >= report.sup_differences[k]) {
            report.differences_decreasing = false;
            detail << "sup differences not decreasing at step " << k << "; ";
        }
    }

    const auto& largest = profiles.back();
    const double bound_const = (static_cast<double>(dimension) + 1.0) * cone_slope + 2.0;
    report.entire_bound_holds = true;
    for (std::size_t i = 0; i < largest.size(); ++i) {
        const double r = largest.grid[i];
        const double gap = largest.values[i] - cone_slope * r;
        const double upper = bound_const * std::min(1.0, r > 0.0 ? 1.0 / r : 1.0);
        const double violation = std::max(-gap, gap - upper);
        if (violation > 1e-9) {
            report.entire_bound_holds = false;
            report.max_bound_violation = std::max(report.max_bound_violation, violation);
            detail << "entire bound fails at r = " << r << " (violation " << violation << "); ";
        }
    }
    report.failure_detail = detail.str();
    return report;
}

double asymptotic_constant(const RadialProfile& p) {
    if (p.dimension < 3) throw std::invalid_argument("asymptotic_constant: need dimension >= 3");
    if (!(p.outer_radius() >= 20.0)) throw std::invalid_argument("asymptotic_constant: need R >= 20");

    const double R = p.outer_radius();
    const double lo = 0.5 * R, hi = 0.75 * R;
    // Fit r(u-kr) ~ a + b (r/R)^2 + c (R/(2r))^2: the r^2 mode is the finite-R
    // boundary layer, the r^-2 mode the next interior correction; plain
    // averaging would be biased by several tens of percent at R = 20.
    double M[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double b[3] = {0, 0, 0};
    std::size_t count = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        if (r < lo || r > hi) continue;
        const double q = r * (p.values[i] - p.cone_slope * r);
        const double phi[3] = {1.0, (r / R) * (r / R), (R / (2.0 * r)) * (R / (2.0 * r))};
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) M[a][c] += phi[a] * phi[c];
            b[a] += phi[a] * q;
        }
        ++count;
    }
    if (count < 8) throw std::invalid_argument("asymptotic_constant: window has too few nodes");

    // Gaussian elimination with partial pivoting on the 3x3 normal system.
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 2; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < 3; ++rr)
            if (std::abs(M[idx[rr]][col]) > std::abs(M[idx[piv]][col])) piv = rr;
        std::swap(idx[col], idx[piv]);
        for (int rr = col + 1; rr < 3; ++rr) {
            const double m = M[idx[rr]][col] / M[idx[col]][col];
            for (int cc = col; cc < 3; ++cc) M[idx[rr]][cc] -= m * M[idx[col]][cc];
            b[idx[rr]] -= m * b[idx[col]];
        }
    }
    double x[3];
    for (int rr = 2; rr >= 0; --rr) {
        double s = b[idx[rr]];
        for (int cc = rr + 1; cc < 3; ++cc) s -= M[idx[rr]][cc] * x[cc];
        x[rr] = s / M[idx[rr]][rr];
    }

    // Residual RMS of the fit, compared against the fitted constant.
    double rss = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double r = p.grid[i];
        if (r < lo || r > hi) continue;
        const double q = r * (p.values[i] - p.cone_slope * r);
        const double phi[3] = {1.0, (r / R) * (r / R), (R / (2.0 * r)) * (R / (2.0 * r))};
        const double fit = x[0] * phi[0] + x[1] * phi[1] + x[2] * phi[2];
        rss += (q - fit) * (q - fit);
    }
    const double rms = std::sqrt(rss / static_cast<double>(count));
    if (rms > 0.1 * std::abs(x[0]))
        throw SolveError("asymptotic_constant: fit variance exceeds 10% of fitted value", rms, 0);
    return x[0];
}

double mean_curvature_identity_residual(const RadialProfile& p) {
    const std::size_t n = p.size();
    if (n < 7) throw std::invalid_argument("mean_curvature_identity_residual: grid too small");
    const double R = p.outer_radius();
    const double lo = 1.0, hi = 0.75 * R;
    if (hi <= lo) throw std::invalid_argument("mean_curvature_identity_residual: empty window");

    const double h = p.grid.spacing(0);
    std::vector<double> H(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i] = profile_mean_curvature(p, i);

    double sup = 0.0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double r = p.grid[i];
        if (r < lo || r > hi) continue;
        const double ur = profile_derivative(p, i);
        const double Hr = (H[i + 1] - H[i - 1]) / (2.0 * h);
        const double lap = profile_laplace_beltrami(p, H, i);
        const double transport = (r + p.values[i] * ur) * Hr / (1.0 + ur * ur);
        const double res = lap + 0.5 * transport + (0.5 + profile_shape_norm_sq(p, i)) * H[i];
        sup = std::max(sup, std::abs(res));
    }
    return sup;
}

MonotonicityReport monotonicity_identity_check(const RadialProfile& p,
                                               const std::vector<double>& rho_list,
                                               double derivative_step) {
    if (p.dimension < 2) throw std::invalid_argument("monotonicity check: need dimension >= 2");
    if (!(derivative_step > 0.0)) throw std::invalid_argument("monotonicity check: need step > 0");
    const double nd = static_cast<double>(p.dimension);
    const double area_factor = num::sphere_volume(p.dimension - 1, 1.0); // n * omega_n

    auto surface_radius = [&](double rho) -> double {
        // root of r^2 + u(r)^2 = rho^2; u nondecreasing makes it unique.
        // A ball below the axis height misses the surface: empty cut.
        double a = 0.0, b = p.outer_radius();
        const double u0 = p.values.front();
        if (u0 * u0 >= rho * rho) return 0.0;
        const double uR = p.values.back();
        if (b * b + uR * uR <= rho * rho)
            throw SolveError("monotonicity check: ball exceeds surface extent", rho, 0);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            const double u = profile_interpolate(p, mid);
            ((mid * mid + u * u < rho * rho) ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };

    auto weighted_integral = [&](double rho, int mode) {
        // mode 0: area; mode 1: |X.nu|^2 / |X|^{n+2}; mode 2: |X.nu|^2
        const double rc = surface_radius(rho);
        if (rc == 0.0) return 0.0;
        auto f = [&](double r) {
            const double u = profile_interpolate(p, r);
            const double ur = profile_interpolate_derivative(p, r);
            const double W = std::sqrt(1.0 + ur * ur);
            const double base = area_factor * std::pow(r, nd - 1.0) * W;
            if (mode == 0) return base;
            const double normal_part = (u - r * ur) / W;
            if (mode == 2) return base * normal_part * normal_part;
            const double dist_sq = r * r + u * u;
            return base * normal_part * normal_part / std::pow(dist_sq, 0.5 * (nd + 2.0));
        };
        return num::integrate(f, 0.0, rc, 1e-11).value;
    };

    MonotonicityReport report;
    report.derivative_step = derivative_step;
    for (double rho : rho_list) {
        const double d = derivative_step;
        auto F = [&](double q) { return std::pow(q, -nd) * weighted_integral(q, 0); };
        auto G = [&](double q) { return weighted_integral(q, 1); };
        MonotonicityCheck check;
        check.rho = rho;
        check.lhs = (F(rho + d) - F(rho - d)) / (2.0 * d);
        check.rhs = (G(rho + d) - G(rho - d)) / (2.0 * d)
                  + 0.5 * std::pow(rho, -nd - 1.0) * weighted_integral(rho, 2);
        check.mismatch = std::abs(check.lhs - check.rhs);
        report.max_mismatch = std::max(report.max_mismatch, check.mismatch);
        report.checks.push_back(check);
    }
    return report;
}

} // namespace expanderlab::ode
