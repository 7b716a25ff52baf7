#include "expanderlab/translator.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/newton.hpp"
#include "expanderlab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace expanderlab::flow {

using ode::RadialProfile;

double TranslatorParams::drift_factor() const {
    return std::isinf(epsilon) ? 0.0 : 1.0 / (2.0 * epsilon * epsilon);
}

void TranslatorParams::validate() const {
    if (base_dimension < 1) throw std::invalid_argument("translator: base dimension >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("translator: epsilon must be positive");
    if (lambda < 0.0) throw std::invalid_argument("translator: lambda must be >= 0");
    if (!(domain_radius > 0.0)) throw std::invalid_argument("translator: domain radius > 0");
}

namespace {

// Discrete equation rows on a uniform grid: ghost-node axis row (phi'(0)=0,
// so the full operator collapses to d*phi''(0) + lambda), central stencils
// inside, the Dirichlet value itself as the last row.
std::vector<double> equation_residual(const TranslatorParams& prm, const num::Grid1D& grid,
                                      const std::vector<double>& phi) {
    const std::size_t last = phi.size() - 1;
    const double h = grid.spacing(0);
    const double d = static_cast<double>(prm.base_dimension);
    const double s = prm.drift_factor();
    std::vector<double> F(phi.size(), 0.0);
    F[0] = d * 2.0 * (phi[1] - phi[0]) / (h * h) + prm.lambda;
    for (std::size_t i = 1; i < last; ++i) {
        const double rho = grid[i];
        const double dp = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        const double dpp = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
        F[i] = dpp / (1.0 + dp * dp) + (d - 1.0) * dp / rho + s * rho * dp + prm.lambda;
    }
    F[last] = phi[last];
    return F;
}

std::vector<double> newton_step(const TranslatorParams& prm, const num::Grid1D& grid,
                                const std::vector<double>& phi, const std::vector<double>& F) {
    const std::size_t last = phi.size() - 1;
    const double h = grid.spacing(0);
    const double d = static_cast<double>(prm.base_dimension);
    const double s = prm.drift_factor();
    std::vector<double> lo(last, 0.0), di(last + 1, 0.0), up(last, 0.0), rhs(last + 1, 0.0);

    di[0] = -2.0 * d / (h * h);
    up[0] = 2.0 * d / (h * h);
    for (std::size_t i = 1; i < last; ++i) {
        const double rho = grid[i];
        const double dp = (phi[i + 1] - phi[i - 1]) / (2.0 * h);
        const double dpp = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
        const double w2 = 1.0 + dp * dp;
        const double conv = dpp * (-2.0 * dp / (w2 * w2)) + (d - 1.0) / rho + s * rho;
        lo[i - 1] = 1.0 / (w2 * h * h) - conv / (2.0 * h);
        di[i] = -2.0 / (w2 * h * h);
        up[i] = 1.0 / (w2 * h * h) + conv / (2.0 * h);
    }
    lo[last - 1] = 0.0;
    di[last] = 1.0;
    for (std::size_t i = 0; i <= last; ++i) rhs[i] = -F[i];
    return num::solve_tridiagonal(lo, di, up, rhs);
}

void certify_translator(const RadialProfile& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.values[i] < -1e-12) {
            std::ostringstream msg;
            msg << "translator positivity violated at rho = " << p.grid[i]
                << " (phi = " << p.values[i] << ")";
            throw InvariantError(msg.str());
        }
        if (i > 0 && p.values[i] > p.values[i - 1] + 1e-12) {
            std::ostringstream msg;
            msg << "translator monotonicity violated at rho = " << p.grid[i];
            throw InvariantError(msg.str());
        }
    }
}

} // namespace

RadialProfile solve_translator(const TranslatorParams& params, std::size_t node_count,
                               const TranslatorSolveOptions& options) {
    params.validate();
    if (node_count < 9) throw std::invalid_argument("translator: need >= 9 nodes");

    const num::Grid1D grid = num::Grid1D::uniform(0.0, params.domain_radius, node_count);
    const bool closed_form_seed = params.base_dimension >= 2 && !std::isinf(params.epsilon);
    std::vector<double> phi(node_count, 0.0);
    for (std::size_t i = 0; i < node_count; ++i) {
        const double rho = grid[i];
        // lambda * v_eps is exact in the steep (large lambda) limit; the
        // small-gradient paraboloid covers the remaining cases
        phi[i] = closed_form_seed
                     ? params.lambda * arrival_time_closed_form(params, rho)
                     : params.lambda *
                           (params.domain_radius * params.domain_radius - rho * rho) /
                           (2.0 * static_cast<double>(params.base_dimension));
    }

    num::NewtonOptions nopt;
    const double h = grid.spacing(0);
    const double seed_max = std::abs(phi.front());
    const double floor =
        8.0 * std::numeric_limits<double>::epsilon() * (1.0 + seed_max) / (h * h);
    nopt.tolerance = std::max(options.residual_tolerance, floor);
    nopt.max_iterations = options.max_iterations;
    auto report = num::newton_damped(
        phi, [&](const std::vector<double>& v) { return equation_residual(params, grid, v); },
        [&](const std::vector<double>& v, const std::vector<double>& f) {
            return newton_step(params, grid, v, f);
        },
        nopt);
    if (!report.converged)
        throw SolveError("translator solve did not converge", report.residual_norm,
                         report.iterations);

    RadialProfile p;
    p.dimension = params.base_dimension;
    p.cone_slope = 0.0;
    p.grid = grid;
    p.values = std::move(phi);
    if (options.check_invariants) certify_translator(p);
    return p;
}

double translator_residual(const RadialProfile& phi, const TranslatorParams& params) {
    params.validate();
    const std::vector<double> F = equation_residual(params, phi.grid, phi.values);
    double sup = 0.0;
    for (double f : F) sup = std::max(sup, std::abs(f));
    return sup;
}

double smean_identity_residual(const RadialProfile& phi, const TranslatorParams& params) {
    params.validate();
    const double s = params.drift_factor();
    double sup = std::abs(ode::profile_mean_curvature(phi, 0) + params.lambda);
    for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
        const double rho = phi.grid[i];
        const double dp = ode::profile_derivative(phi, i);
        const double w = std::sqrt(1.0 + dp * dp);
        // <x,nu> = -rho phi'/W (horizontal position), <E,nu> = 1/W
        const double val =
            ode::profile_mean_curvature(phi, i) + s * rho * dp / w + params.lambda / w;
        sup = std::max(sup, std::abs(val));
    }
    return sup;
}

double smean_curvature_max(const RadialProfile& phi, const TranslatorParams& params) {
    params.validate();
    const double s = params.drift_factor();
    double worst = ode::profile_mean_curvature(phi, 0);  // axis: <x,nu> = 0
    for (std::size_t i = 1; i < phi.size(); ++i) {
        const double rho = phi.grid[i];
        const double dp = ode::profile_derivative(phi, i);
        const double w = std::sqrt(1.0 + dp * dp);
        worst = std::max(worst, ode::profile_mean_curvature(phi, i) + s * rho * dp / w);
    }
    return worst;
}

double arrival_time_closed_form(const TranslatorParams& params, double rho) {
    params.validate();
    if (params.base_dimension < 2)
        throw std::invalid_argument("arrival time closed form: need base dimension >= 2");
    if (std::isinf(params.epsilon))
        throw std::invalid_argument("arrival time closed form: need finite epsilon");
    if (rho < 0.0 || rho > params.domain_radius)
        throw std::invalid_argument("arrival time closed form: rho outside the domain");
    const double d1 = static_cast<double>(params.base_dimension - 1);
    const double s = params.drift_factor();
    return (std::log(d1 + s * params.domain_radius * params.domain_radius) -
            std::log(d1 + s * rho * rho)) /
           (2.0 * s);
}

ArrivalTimeReport arrival_time_limit(const TranslatorParams& base,
                                     const std::vector<double>& lambda_list,
                                     std::size_t node_count) {
    base.validate();
    if (lambda_list.size() < 3)
        throw std::invalid_argument("arrival time limit: need >= 3 lambda values");
    for (std::size_t k = 0; k < lambda_list.size(); ++k)
        if (!(lambda_list[k] > 0.0) || (k > 0 && lambda_list[k] <= lambda_list[k - 1]))
            throw std::invalid_argument("arrival time limit: lambdas must be ascending, > 0");

    ArrivalTimeReport report;
    report.lambdas = lambda_list;
    std::vector<std::vector<double>> scaled;
    scaled.reserve(lambda_list.size());
    num::Grid1D grid = num::Grid1D::uniform(0.0, base.domain_radius, node_count);
    const double h = grid.spacing(0);

    for (double lambda : lambda_list) {
        TranslatorParams prm = base;
        prm.lambda = lambda;
        const RadialProfile p = solve_translator(prm, node_count);
        std::vector<double> v(node_count);
        for (std::size_t i = 0; i < node_count; ++i) v[i] = p.values[i] / lambda;
        scaled.push_back(std::move(v));

        // arrival-time equation residual away from the axis (|v'| -> 0 there)
        const double s = base.drift_factor();
        const double d1 = static_cast<double>(base.base_dimension - 1);
        double res = 0.0;
        for (std::size_t i = 1; i + 1 < node_count; ++i) {
            const double rho = grid[i];
            if (rho < 0.25 * base.domain_radius || rho > 0.75 * base.domain_radius) continue;
            const double vp = (scaled.back()[i + 1] - scaled.back()[i - 1]) / (2.0 * h);
            res = std::max(res, std::abs(-d1 / rho - s * rho - 1.0 / vp));
        }
        report.equation_residuals.push_back(res);
    }

    for (std::size_t k = 0; k + 1 < scaled.size(); ++k) {
        double diff = 0.0;
        for (std::size_t i = 0; i < node_count; ++i)
            diff = std::max(diff, std::abs(scaled[k + 1][i] - scaled[k][i]));
        report.sup_differences.push_back(diff);
    }

    if (base.base_dimension >= 2 && !std::isinf(base.epsilon)) {
        for (std::size_t i = 0; i < node_count; ++i)
            report.closed_form_gap =
                std::max(report.closed_form_gap,
                         std::abs(scaled.back()[i] - arrival_time_closed_form(base, grid[i])));
    }

    report.cauchy = true;
    for (std::size_t k = 1; k < report.sup_differences.size(); ++k)
        if (report.sup_differences[k] >= report.sup_differences[k - 1]) report.cauchy = false;
    report.residuals_decreasing = true;
    for (std::size_t k = 1; k < report.equation_residuals.size(); ++k)
        if (report.equation_residuals[k] >= report.equation_residuals[k - 1])
            report.residuals_decreasing = false;
    return report;
}

} // namespace expanderlab::flow
