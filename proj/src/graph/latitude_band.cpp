#include "expanderlab/latitude_band.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/tridiagonal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace expanderlab::graph {

namespace {

// The band equation keeps its boundary values pinned at zero; unknowns are
// the interior nodes. weight = 1/(2 eps^2), zero in the unweighted limit.
// source_scale multiplies the full right-hand side n + weight exp(2v); the
// solver marches it from 0 to 1 when the direct Newton attempt creeps (the
// solutions develop steep end layers, and scaling the source is a natural
// homotopy whose t = 0 member is identically zero).
struct BandProblem {
    std::vector<double> theta;  // all nodes including the pinned ends
    double h = 0.0;
    int n = 2;
    double weight = 0.0;
    double source_scale = 1.0;

    std::size_t interior() const { return theta.size() - 2; }

    double equation(double tm, double tc, double tp, double th) const {
        const double dp = (tp - tm) / (2.0 * h);
        const double dpp = (tp - 2.0 * tc + tm) / (h * h);
        return dpp / (1.0 + dp * dp) + (n - 1) * (std::cos(th) / std::sin(th)) * dp -
               source_scale * (weight * std::exp(2.0 * tc) + n);
    }

    void residual(const std::vector<double>& v, std::vector<double>& f) const {
        f.resize(interior());
        for (std::size_t k = 0; k < f.size(); ++k) {
            const double vm = k == 0 ? 0.0 : v[k - 1];
            const double vp = k + 1 == f.size() ? 0.0 : v[k + 1];
            f[k] = equation(vm, v[k], vp, theta[k + 1]);
        }
    }

    std::vector<double> newton_step(const std::vector<double>& v,
                                    const std::vector<double>& f) const {
        const std::size_t m = interior();
        std::vector<double> lower(m - 1), diag(m), upper(m - 1), rhs(m);
        for (std::size_t k = 0; k < m; ++k) {
            const double vm = k == 0 ? 0.0 : v[k - 1];
            const double vp = k + 1 == m ? 0.0 : v[k + 1];
            const double th = theta[k + 1];
            const double dp = (vp - vm) / (2.0 * h);
            const double dpp = (vp - 2.0 * v[k] + vm) / (h * h);
            const double w2 = 1.0 + dp * dp;
            const double cot = std::cos(th) / std::sin(th);

            // d/dv_{k+-1} of v''/(1+v'^2): stencil part plus the drag of v'
            // through the denominator; d/dv_k only touches the stencil and
            // the exponential source.
            const double stencil = 1.0 / (h * h * w2);
            const double drag = -dpp * 2.0 * dp / (w2 * w2) / (2.0 * h);
            diag[k] = -2.0 * stencil - 2.0 * source_scale * weight * std::exp(2.0 * v[k]);
            if (k > 0) lower[k - 1] = stencil - drag - (n - 1) * cot / (2.0 * h);
            if (k + 1 < m) upper[k] = stencil + drag + (n - 1) * cot / (2.0 * h);
            rhs[k] = -f[k];
        }
        return num::solve_tridiagonal(lower, diag, upper, rhs);
    }
};

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

// Damped Newton with an L2 line search (the end layers make the sup norm a
// poor merit function: it pins at the layer while the bulk converges).
// Convergence itself is still declared in the sup norm.
bool newton_stage(const BandProblem& problem, std::vector<double>& v, double tolerance,
                  int max_iterations, int max_halvings, double& final_sup) {
    std::vector<double> f, ftrial;
    problem.residual(v, f);
    double merit = l2_norm(f);
    final_sup = sup_norm(f);
    std::vector<double> trial(v.size());
    for (int it = 0; it < max_iterations; ++it) {
        if (final_sup <= tolerance) return true;
        const std::vector<double> delta = problem.newton_step(v, f);
        double alpha = 1.0;
        bool accepted = false;
        for (int hv = 0; hv <= max_halvings; ++hv) {
            for (std::size_t i = 0; i < v.size(); ++i) trial[i] = v[i] + alpha * delta[i];
            problem.residual(trial, ftrial);
            const double tmerit = l2_norm(ftrial);
            if (tmerit < merit * (1.0 - 1e-4 * alpha)) {
                v.swap(trial);
                f.swap(ftrial);
                merit = tmerit;
                final_sup = sup_norm(f);
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) return final_sup <= tolerance;
    }
    return final_sup <= tolerance;
}

} // namespace

LatitudeField solve_latitude_band(double epsilon, double theta1, double theta2,
                                  int sphere_dimension, std::size_t node_count,
                                  const LatitudeSolveOptions& options) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("latitude band: epsilon must be positive");
    if (!(theta1 > 0.0) || !(theta2 > theta1) || !(theta2 < std::numbers::pi))
        throw std::invalid_argument("latitude band: need 0 < theta1 < theta2 < pi");
    if (sphere_dimension < 2)
        throw std::invalid_argument("latitude band: sphere dimension must be >= 2");
    if (node_count < 5) throw std::invalid_argument("latitude band: need at least 5 nodes");

    BandProblem problem;
    problem.n = sphere_dimension;
    problem.weight = std::isinf(epsilon) ? 0.0 : 1.0 / (2.0 * epsilon * epsilon);
    num::Grid1D grid = num::Grid1D::uniform(theta1, theta2, node_count);
    problem.theta = grid.nodes();
    problem.h = grid.spacing(0);

    // Second differences of rounding noise scale like eps/h^2; don't ask the
    // residual to fall below that.
    const double tolerance =
        std::max(options.residual_tolerance,
                 8.0 * std::numeric_limits<double>::epsilon() *
                     (1.0 + static_cast<double>(problem.n)) / (problem.h * problem.h));

    // Adaptive homotopy in the source multiplier. The first attempt is the
    // full problem; failures shrink the continuation step.
    std::vector<double> v(problem.interior(), 0.0);
    double reached = 0.0;
    double step = 1.0;
    double sup = 0.0;
    int stages = 0;
    while (reached < 1.0) {
        if (++stages > 64)
            throw SolveError("latitude band: source continuation stalled", sup, stages);
        const double target = std::min(1.0, reached + step);
        problem.source_scale = target;
        std::vector<double> attempt = v;
        const double stage_tol = target >= 1.0 ? tolerance : std::max(tolerance, 1e-6);
        if (newton_stage(problem, attempt, stage_tol, options.max_iterations,
                         options.max_halvings, sup)) {
            v.swap(attempt);
            reached = target;
            step *= 2.0;
        } else {
            step *= 0.25;
            if (step < 1.0 / 4096.0)
                throw SolveError("latitude band: Newton did not converge", sup, stages);
        }
    }

    LatitudeField field;
    field.epsilon = epsilon;
    field.sphere_dimension = sphere_dimension;
    field.theta_grid = std::move(grid);
    field.values.assign(node_count, 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] > 1e-12)
            throw InvariantError("latitude band: solution is not nonpositive");
        field.values[k + 1] = std::min(v[k], 0.0);
    }
    field.residual_sup = sup;
    for (std::size_t k = 0; k + 1 < node_count; ++k)
        field.gradient_sup = std::max(
            field.gradient_sup, std::abs(field.values[k + 1] - field.values[k]) / problem.h);
    return field;
}

double latitude_band_residual(const LatitudeField& field) {
    const std::size_t n = field.theta_grid.size();
    if (field.values.size() != n || n < 5)
        throw std::invalid_argument("latitude band: field and grid sizes do not match");
    BandProblem problem;
    problem.n = field.sphere_dimension;
    problem.weight = std::isinf(field.epsilon) ? 0.0 : 1.0 / (2.0 * field.epsilon * field.epsilon);
    problem.theta = field.theta_grid.nodes();
    problem.h = field.theta_grid.spacing(0);
    double sup = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k)
        sup = std::max(sup, std::abs(problem.equation(field.values[k - 1], field.values[k],
                                                      field.values[k + 1], field.theta_grid[k])));
    return sup;
}

} // namespace expanderlab::graph
