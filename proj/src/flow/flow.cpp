#include "expanderlab/flow.hpp"

#include "expanderlab/errors.hpp"
#include "expanderlab/expander_ode.hpp"
#include "expanderlab/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace expanderlab::flow {

using ode::RadialProfile;

RadialGraphFlow::RadialGraphFlow(RadialProfile initial, FlowOptions options,
                                 std::function<double(double)> boundary_value,
                                 double start_time)
    : state_(std::move(initial)), options_(options),
      boundary_(std::move(boundary_value)), time_(start_time) {
    if (state_.size() < 5) throw std::invalid_argument("RadialGraphFlow: need >= 5 nodes");
    if (state_.values.size() != state_.grid.size())
        throw std::invalid_argument("RadialGraphFlow: values/grid size mismatch");
    if (!state_.grid.is_uniform())
        throw std::invalid_argument("RadialGraphFlow: grid must be uniform");
    if (state_.dimension < 1) throw std::invalid_argument("RadialGraphFlow: dimension >= 1");
    if (!(options_.dt > 0.0)) throw std::invalid_argument("RadialGraphFlow: dt must be positive");
    if (!(options_.blow_up_threshold > 0.0))
        throw std::invalid_argument("RadialGraphFlow: blow-up threshold must be positive");
    if (!boundary_) {
        const double edge = state_.values.back();
        boundary_ = [edge](double) { return edge; };
    }
    check_state();
}

// Rows of the operator A(w) with u_t = A(w) u exact at u = w: the graphic
// speed D(w) u_rr + C(r) u_r - S u is linear in u once the gradient factor
// D = 1/(1+w_r^2) is frozen. Row layout matches solve_tridiagonal: lower[i]
// couples row i+1 to column i; the boundary row (last) is left empty.
RadialGraphFlow::OperatorRows RadialGraphFlow::linearized_at(const std::vector<double>& w) const {
    const std::size_t last = w.size() - 1;
    const double h = state_.grid.spacing(0);
    const double nd = static_cast<double>(state_.dimension);
    const double s = options_.s;
    const double S = options_.s_mode == SMode::full_position ? s : 0.0;

    OperatorRows A;
    A.lower.assign(last, 0.0);
    A.diag.assign(last + 1, 0.0);
    A.upper.assign(last, 0.0);

    // axis row: u_r(0) = 0, so the full speed collapses to n u_rr(0) - S u(0)
    A.diag[0] = -2.0 * nd / (h * h) - S;
    A.upper[0] = 2.0 * nd / (h * h);

    for (std::size_t i = 1; i < last; ++i) {
        const double r = state_.grid[i];
        const double wr = (w[i + 1] - w[i - 1]) / (2.0 * h);
        const double D = 1.0 / (1.0 + wr * wr);
        const double C = (nd - 1.0) / r + s * r;
        A.lower[i - 1] = D / (h * h) - C / (2.0 * h);
        A.diag[i] = -2.0 * D / (h * h) - S;
        A.upper[i] = D / (h * h) + C / (2.0 * h);
    }
    return A;
}

std::vector<double> RadialGraphFlow::apply(const OperatorRows& A,
                                           const std::vector<double>& u) const {
    const std::size_t last = u.size() - 1;
    std::vector<double> y(u.size(), 0.0);
    y[0] = A.diag[0] * u[0] + A.upper[0] * u[1];
    for (std::size_t i = 1; i < last; ++i)
        y[i] = A.lower[i - 1] * u[i - 1] + A.diag[i] * u[i] + A.upper[i] * u[i + 1];
    return y;
}

std::vector<double> RadialGraphFlow::implicit_solve(const OperatorRows& A, double theta_dt,
                                                    std::vector<double> rhs,
                                                    double boundary) const {
    const std::size_t last = rhs.size() - 1;
    std::vector<double> dl(last, 0.0), d(last + 1, 1.0), du(last, 0.0);
    for (std::size_t i = 0; i < last; ++i) {
        d[i] = 1.0 - theta_dt * A.diag[i];
        du[i] = -theta_dt * A.upper[i];
    }
    for (std::size_t i = 1; i < last; ++i) dl[i - 1] = -theta_dt * A.lower[i - 1];
    dl[last - 1] = 0.0;  // Dirichlet row
    rhs[last] = boundary;
    return num::solve_tridiagonal(dl, d, du, rhs);
}

void RadialGraphFlow::step(double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("RadialGraphFlow: step size must be positive");
    const auto& u = state_.values;
    const double h = state_.grid.spacing(0);
    const double b_mid = boundary_(time_ + 0.5 * dt);
    const double b_end = boundary_(time_ + dt);

    std::vector<double> next;
    if (options_.scheme == TimeScheme::explicit_euler) {
        if (dt > 0.25 * h * h * (1.0 + 1e-12))
            throw std::invalid_argument("RadialGraphFlow: explicit step exceeds dt <= h^2/4");
        const OperatorRows A = linearized_at(u);
        const std::vector<double> Au = apply(A, u);
        next = u;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) next[i] += dt * Au[i];
        next.back() = b_end;
    } else {
        // linearly-implicit midpoint: predict the half step with coefficients
        // frozen at u, then take a trapezoidal step with coefficients frozen
        // at the predicted midpoint state (second order in dt)
        const OperatorRows A0 = linearized_at(u);
        const std::vector<double> mid = implicit_solve(A0, 0.5 * dt, u, b_mid);
        const OperatorRows A1 = linearized_at(mid);
        const std::vector<double> Au = apply(A1, u);
        std::vector<double> rhs = u;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) rhs[i] += 0.5 * dt * Au[i];
        next = implicit_solve(A1, 0.5 * dt, std::move(rhs), b_end);
    }

    state_.values = std::move(next);
    time_ += dt;
    check_state();
}

void RadialGraphFlow::advance_to(double t_target) {
    const double dt = options_.dt;
    while (time_ + dt <= t_target + 1e-12 * std::max(1.0, std::abs(t_target))) step(dt);
    const double rest = t_target - time_;
    if (rest > 1e-12 * std::max(1.0, std::abs(t_target))) step(rest);
}

void RadialGraphFlow::check_state() const {
    const auto& u = state_.values;
    const double h = state_.grid.spacing(0);
    const double cap = options_.blow_up_threshold;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || std::abs(u[i]) > cap)
            throw BlowUpError("radial graph flow left the representable regime", time_);
        if (i > 0 && std::abs(u[i] - u[i - 1]) > cap * h)
            throw BlowUpError("radial graph flow gradient blew up", time_);
    }
}

FixedPointReport expander_fixed_point_drift(int dimension, double cone_slope, double R,
                                            std::size_t node_count, double dt, double t_final,
                                            TimeScheme scheme) {
    if (node_count < 9) throw std::invalid_argument("fixed-point drift: need >= 9 nodes");
    if (!(t_final > 0.0)) throw std::invalid_argument("fixed-point drift: need t_final > 0");

    // restriction of a 4x-finer solve: near-continuum data on the coarse
    // nodes, so the measured drift is the flow's own truncation error
    const std::size_t fine_nodes = 4 * (node_count - 1) + 1;
    const RadialProfile fine = ode::solve_radial_expander(dimension, cone_slope, R, fine_nodes);
    RadialProfile init;
    init.dimension = dimension;
    init.cone_slope = cone_slope;
    init.grid = num::Grid1D::uniform(0.0, R, node_count);
    init.values.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) init.values[i] = fine.values[4 * i];

    FlowOptions opts;
    opts.s = 0.5;
    opts.dt = dt;
    opts.scheme = scheme;
    opts.s_mode = SMode::full_position;

    const std::vector<double> u0 = init.values;
    RadialGraphFlow flow(std::move(init), opts);
    flow.advance_to(t_final);

    FixedPointReport report;
    report.time_horizon = t_final;
    report.node_count = node_count;
    report.dt = dt;
    for (std::size_t i = 0; i < node_count; ++i)
        report.drift_sup = std::max(report.drift_sup,
                                    std::abs(flow.profile().values[i] - u0[i]));
    return report;
}

namespace {

// Expander profile extended to all radii: table-backed on [0, 4R], far-field
// asymptote slope*x + (n-1)*slope/x beyond. slope = 0 short-circuits to the
// flat plane.
class ExtendedProfile {
public:
    ExtendedProfile(int dimension, double cone_slope, double R) : slope_(cone_slope) {
        if (slope_ == 0.0) return;
        outer_ = 4.0 * R;
        table_ = ode::solve_radial_expander(dimension, cone_slope, outer_, 32001);
        far_coeff_ = static_cast<double>(dimension - 1) * cone_slope;
    }

    double operator()(double x) const {
        if (slope_ == 0.0) return 0.0;
        if (x >= outer_) return slope_ * x + far_coeff_ / x;
        return ode::profile_interpolate(table_, x);
    }

private:
    double slope_ = 0.0;
    double outer_ = 0.0;
    double far_coeff_ = 0.0;
    RadialProfile table_;
};

} // namespace

ConvergenceReport normalized_convergence(int dimension, double cone_slope, double R,
                                         double t_final, std::size_t node_count, double dt,
                                         double tolerance, double start_time) {
    if (dimension < 2) throw std::invalid_argument("normalized convergence: need dimension >= 2");
    if (cone_slope < 0.0) throw std::invalid_argument("normalized convergence: need slope >= 0");
    if (node_count < 9) throw std::invalid_argument("normalized convergence: need >= 9 nodes");
    if (!(t_final > start_time) || start_time < 0.0)
        throw std::invalid_argument("normalized convergence: need t_final > start_time >= 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("normalized convergence: tolerance > 0");

    const ExtendedProfile phi(dimension, cone_slope, R);
    const auto trace = [&](double t) {
        if (t <= 0.0) return cone_slope * R;
        const double rt = std::sqrt(t);
        return rt * phi(R / rt);
    };

    RadialProfile init;
    init.dimension = dimension;
    init.cone_slope = cone_slope;
    init.grid = num::Grid1D::uniform(0.0, R, node_count);
    init.values.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        const double r = init.grid[i];
        init.values[i] = start_time > 0.0 ? std::sqrt(start_time) * phi(r / std::sqrt(start_time))
                                          : cone_slope * r;
    }

    FlowOptions opts;
    opts.dt = dt;  // s stays 0: plain mean curvature flow
    RadialGraphFlow flow(std::move(init), opts, trace, start_time);

    const auto normalized_error = [&](double t) {
        double e = 0.0;
        const RadialProfile& p = flow.profile();
        const double rt = std::sqrt(t);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double r = p.grid[i];
            if (r > 0.25 * R * (1.0 + 1e-12)) break;
            e = std::max(e, std::abs(p.values[i] / rt - phi(r / rt)));
        }
        return e;
    };

    ConvergenceReport report;
    report.tolerance = tolerance;
    for (int j = 5; j >= 0; --j) {
        const double t = std::ldexp(t_final, -j);
        if (t <= start_time + 2.0 * dt) continue;
        flow.advance_to(t);
        report.samples.push_back({t, normalized_error(t)});
    }
    if (report.samples.empty()) {
        report.detail = "no sample times beyond the start time";
        return report;
    }
    report.final_error = report.samples.back().error;
    report.errors_decreasing = true;
    for (std::size_t k = 1; k < report.samples.size(); ++k)
        if (report.samples[k].error > report.samples[k - 1].error + 1e-12)
            report.errors_decreasing = false;
    report.certified = report.errors_decreasing && report.final_error <= tolerance;
    if (!report.errors_decreasing)
        report.detail = "sampled normalized errors are not decreasing";
    else if (report.final_error > tolerance)
        report.detail = "final normalized error exceeds the tolerance";
    return report;
}

ReparametrizationReport reparametrization_check(int dimension, double cone_slope, double s,
                                                double t_final, double domain_radius,
                                                double window_radius, std::size_t node_count,
                                                double dt) {
    if (dimension < 2) throw std::invalid_argument("reparametrization: need dimension >= 2");
    if (!(s > 0.0)) throw std::invalid_argument("reparametrization: need s > 0");
    if (!(t_final > 0.0)) throw std::invalid_argument("reparametrization: need t_final > 0");
    if (node_count < 9) throw std::invalid_argument("reparametrization: need >= 9 nodes");
    if (!(window_radius > 0.0) || window_radius > 0.5 * domain_radius)
        throw std::invalid_argument("reparametrization: window must leave boundary padding");

    const double h = domain_radius / static_cast<double>(node_count - 1);
    const double scale = std::exp(s * t_final);
    const double duration = std::expm1(2.0 * s * t_final) / (2.0 * s);
    const auto initial_graph = [&](double r) { return cone_slope * std::sqrt(1.0 + r * r); };

    RadialProfile sa;
    sa.dimension = dimension;
    sa.cone_slope = cone_slope;
    sa.grid = num::Grid1D::uniform(0.0, domain_radius, node_count);
    sa.values.resize(node_count);
    for (std::size_t i = 0; i < node_count; ++i) sa.values[i] = initial_graph(sa.grid[i]);

    FlowOptions sopts;
    sopts.s = s;
    sopts.dt = dt;
    RadialGraphFlow sflow(std::move(sa), sopts);
    sflow.advance_to(t_final);

    // plain-flow leg on a domain stretched past scale * domain_radius so the
    // comparison window y <= window_radius never feels either frozen edge
    const std::size_t wide_nodes =
        static_cast<std::size_t>(std::ceil(scale * domain_radius / h - 1e-9)) + 1;
    RadialProfile ma;
    ma.dimension = dimension;
    ma.cone_slope = cone_slope;
    ma.grid = num::Grid1D::uniform(0.0, static_cast<double>(wide_nodes - 1) * h, wide_nodes);
    ma.values.resize(wide_nodes);
    for (std::size_t i = 0; i < wide_nodes; ++i) ma.values[i] = initial_graph(ma.grid[i]);

    FlowOptions mopts;
    mopts.dt = dt;
    RadialGraphFlow mflow(std::move(ma), mopts);
    mflow.advance_to(duration);

    ReparametrizationReport report;
    report.scale = scale;
    report.mcf_duration = duration;
    report.window_radius = window_radius;
    constexpr int kSamples = 256;
    for (int k = 0; k <= kSamples; ++k) {
        const double y = window_radius * static_cast<double>(k) / kSamples;
        const double plain = ode::profile_interpolate(mflow.profile(), y);
        const double mapped = scale * ode::profile_interpolate(sflow.profile(), y / scale);
        report.discrepancy = std::max(report.discrepancy, std::abs(plain - mapped));
    }
    return report;
}

FlowTrajectory run_radial_flow(const RadialProfile& initial, const FlowOptions& options,
                               const std::function<double(double)>& boundary_value,
                               double t_final, double store_from_time,
                               std::size_t store_stride) {
    if (store_stride == 0) throw std::invalid_argument("run_radial_flow: stride must be >= 1");
    const double dt = options.dt;
    const auto steps = static_cast<long long>(std::llround(t_final / dt));
    if (steps < 1 || std::abs(static_cast<double>(steps) * dt - t_final) >
                         1e-9 * std::max(1.0, std::abs(t_final)))
        throw std::invalid_argument("run_radial_flow: t_final must be a whole number of steps");
    const auto first_store =
        static_cast<long long>(std::ceil(store_from_time / dt - 1e-9));

    FlowTrajectory traj;
    traj.options = options;
    RadialGraphFlow flow(initial, options, boundary_value);
    const auto store = [&]() {
        traj.profiles.push_back(flow.profile());
        traj.times.push_back(flow.time());
    };
    if (first_store <= 0) store();
    for (long long k = 1; k <= steps; ++k) {
        flow.advance();
        if (k >= first_store && (k - std::max(first_store, 0LL)) % store_stride == 0) store();
    }
    return traj;
}

double h_evolution_residual(const FlowTrajectory& trajectory, double r_lo, double r_hi,
                            bool omit_reaction_term) {
    const auto& profiles = trajectory.profiles;
    const auto& times = trajectory.times;
    if (profiles.size() < 3 || times.size() != profiles.size())
        throw std::invalid_argument("h_evolution_residual: need >= 3 stored profiles");
    if (trajectory.options.s != 0.0 && trajectory.options.s_mode != SMode::full_position)
        throw std::invalid_argument("h_evolution_residual: identity needs the full-position flow");
    const double dt = times[1] - times[0];
    for (std::size_t m = 1; m + 1 < times.size(); ++m)
        if (std::abs(times[m + 1] - times[m] - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("h_evolution_residual: stored times must be uniform");

    const std::size_t n = profiles.front().size();
    for (const auto& p : profiles)
        if (p.size() != n) throw std::invalid_argument("h_evolution_residual: grid changed");

    std::vector<std::vector<double>> H(profiles.size(), std::vector<double>(n, 0.0));
    for (std::size_t m = 0; m < profiles.size(); ++m)
        for (std::size_t i = 0; i < n; ++i) H[m][i] = ode::profile_mean_curvature(profiles[m], i);

    const double s = trajectory.options.s;
    const double h = profiles.front().grid.spacing(0);
    double sup = 0.0;
    for (std::size_t m = 1; m + 1 < profiles.size(); ++m) {
        const RadialProfile& p = profiles[m];
        for (std::size_t i = 2; i + 2 < n; ++i) {
            const double r = p.grid[i];
            if (r < r_lo || r > r_hi) continue;
            const double ur = ode::profile_derivative(p, i);
            const double w2 = 1.0 + ur * ur;
            const double dHdt = (H[m + 1][i] - H[m - 1][i]) / (2.0 * dt);
            const double ut = (profiles[m + 1].values[i] - profiles[m - 1].values[i]) / (2.0 * dt);
            const double Hr = (H[m][i + 1] - H[m][i - 1]) / (2.0 * h);
            // graph nodes are not material points; the tangential drift of
            // the graph parametrization contributes exactly this correction
            const double transport = (s * (r + p.values[i] * ur) + ut * ur) * Hr / w2;
            const double lap = ode::profile_laplace_beltrami(p, H[m], i);
            const double reaction = omit_reaction_term ? 0.0 : s * H[m][i];
            const double rhs = lap + ode::profile_shape_norm_sq(p, i) * H[m][i] + reaction;
            sup = std::max(sup, std::abs(dHdt - transport - rhs));
        }
    }
    return sup;
}

OrderingReport ordering_check(const RadialProfile& lower, const RadialProfile& upper,
                              const FlowOptions& options, double t_final) {
    if (lower.size() != upper.size() ||
        std::abs(lower.outer_radius() - upper.outer_radius()) > 1e-12)
        throw std::invalid_argument("ordering_check: profiles must share a grid");
    if (!(t_final > 0.0)) throw std::invalid_argument("ordering_check: need t_final > 0");

    RadialGraphFlow lo(lower, options);
    RadialGraphFlow hi(upper, options);

    OrderingReport report;
    const auto scan = [&]() {
        double worst = 0.0;
        for (std::size_t i = 0; i < lower.size(); ++i)
            worst = std::max(worst, lo.profile().values[i] - hi.profile().values[i]);
        if (worst > report.max_violation) {
            report.max_violation = worst;
            report.violation_time = lo.time();
        }
    };
    scan();
    while (lo.time() < t_final - 0.5 * options.dt) {
        lo.advance();
        hi.advance();
        scan();
    }
    report.ordered = report.max_violation <= 1e-9;
    return report;
}

} // namespace expanderlab::flow
