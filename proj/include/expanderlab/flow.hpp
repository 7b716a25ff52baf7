#pragma once

#include "expanderlab/radial_profile.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace expanderlab::flow {

enum class TimeScheme {
    semi_implicit,   // linearly-implicit midpoint: two tridiagonal solves,
                     // second order in dt, no step-size restriction
    explicit_euler,  // cross-check scheme, guarded by dt <= h^2/4
};

/// How the position term of dX/dt = H - s X enters the graphic equation.
/// full_position uses the whole position vector (vertical speed
/// u_rr/W^2 + (n-1)u_r/r + s r u_r - s u); horizontal drops the vertical
/// component, as in the drift weight of the translator problem
/// (same equation without the -s u reaction term).
enum class SMode { full_position, horizontal };

struct FlowOptions {
    double s = 0.0;  // flow constant; 0 is plain mean curvature flow
    double dt = 1e-3;
    TimeScheme scheme = TimeScheme::semi_implicit;
    SMode s_mode = SMode::full_position;
    double blow_up_threshold = 1e8;  // on both values and gradients
};

/// Rotationally symmetric graph flow on [0, outer_radius]: even symmetry at
/// the axis, Dirichlet datum boundary_value(t) at the outer edge (default:
/// frozen at the initial edge value). Throws BlowUpError when the state
/// exceeds the blow-up threshold, std::invalid_argument when the explicit
/// scheme is asked to step past its CFL bound.
class RadialGraphFlow {
public:
    RadialGraphFlow(ode::RadialProfile initial, FlowOptions options,
                    std::function<double(double)> boundary_value = {},
                    double start_time = 0.0);

    const ode::RadialProfile& profile() const { return state_; }
    double time() const { return time_; }

    void advance() { step(options_.dt); }
    void advance(double dt_override) { step(dt_override); }
    /// Whole steps of options.dt plus one remainder step.
    void advance_to(double t_target);

private:
    struct OperatorRows {  // tridiagonal rows of the frozen-coefficient operator
        std::vector<double> lower, diag, upper;
    };
    OperatorRows linearized_at(const std::vector<double>& w) const;
    std::vector<double> apply(const OperatorRows& A, const std::vector<double>& u) const;
    std::vector<double> implicit_solve(const OperatorRows& A, double theta_dt,
                                       std::vector<double> rhs, double boundary) const;
    void step(double dt);
    void check_state() const;

    ode::RadialProfile state_;
    FlowOptions options_;
    std::function<double(double)> boundary_;
    double time_ = 0.0;
};

/// Start from the restriction of a 4x-finer expander solve (a near-continuum
/// fixed point), flow under s = 1/2 full-position, and measure how far the
/// discrete flow drifts from it: sup_i |u_i(T) - u_i(0)|. Pure truncation,
/// so halving (dt, h) should cut it ~4x.
struct FixedPointReport {
    double drift_sup = 0.0;
    double time_horizon = 0.0;
    std::size_t node_count = 0;
    double dt = 0.0;
};

FixedPointReport expander_fixed_point_drift(int dimension, double cone_slope, double R,
                                            std::size_t node_count, double dt, double t_final,
                                            TimeScheme scheme = TimeScheme::semi_implicit);

/// Mean curvature flow from the cone u(y,0) = slope*|y| on [0, R], boundary
/// pinned to the self-similar trace sqrt(t)*phi(R/sqrt(t)) of the expander
/// (table-backed for moderate arguments, far-field asymptote beyond).
/// Tabulates e(t) = sup_{|y| <= R/4} |u(y,t)/sqrt(t) - phi(y/sqrt(t))| at a
/// geometric time ladder; certifies e decreasing and e(t_final) <= tolerance.
/// start_time > 0 instead begins from the exact self-similar state at that
/// time (fixed-point variant). slope = 0 degenerates to the flat plane.
struct ConvergenceSample {
    double time = 0.0;
    double error = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceSample> samples;
    double final_error = 0.0;
    double tolerance = 0.0;
    bool errors_decreasing = false;
    bool certified = false;  // decreasing and final within tolerance
    std::string detail;
};

ConvergenceReport normalized_convergence(int dimension, double cone_slope, double R,
                                         double t_final, std::size_t node_count, double dt,
                                         double tolerance = 1e-2, double start_time = 0.0);

/// Evolve the same initial graph slope*sqrt(1+y^2) (a) under the s-flow to
/// time t_final and (b) under plain mean curvature flow for the rescaled
/// duration (e^{2 s t_final} - 1)/(2s), then compare the flows through the
/// self-similar correspondence u_mcf(y) ~ c * u_s(y/c), c = e^{s t_final},
/// in sup norm over |y| <= window_radius. Domains are padded so the frozen
/// Dirichlet edges stay causally irrelevant to the window.
struct ReparametrizationReport {
    double discrepancy = 0.0;
    double scale = 1.0;         // e^{s t_final}
    double mcf_duration = 0.0;  // (e^{2 s t_final} - 1)/(2s)
    double window_radius = 0.0;
};

ReparametrizationReport reparametrization_check(int dimension, double cone_slope, double s,
                                                double t_final, double domain_radius,
                                                double window_radius, std::size_t node_count,
                                                double dt);

/// A stored stretch of a flow: profiles at uniformly spaced times
/// (store_stride steps apart) beginning at store_from_time.
struct FlowTrajectory {
    std::vector<ode::RadialProfile> profiles;
    std::vector<double> times;
    FlowOptions options;
};

FlowTrajectory run_radial_flow(const ode::RadialProfile& initial, const FlowOptions& options,
                               const std::function<double(double)>& boundary_value,
                               double t_final, double store_from_time = 0.0,
                               std::size_t store_stride = 1);

/// Sup over the window [r_lo, r_hi] and interior stored times of the defect
/// in the evolution identity for the mean curvature,
///   dH/dt|material = Laplace_M H + |A|^2 H + s H,
/// where the material rate is reconstructed from the graphic one by the
/// transport correction [s(r + u u_r) + u_t u_r] H_r / W^2 (the graph
/// parametrization differs from the flow's material one by exactly that
/// tangential drift). omit_reaction_term drops the s H term: the negative
/// control whose residual must not vanish under refinement.
double h_evolution_residual(const FlowTrajectory& trajectory, double r_lo, double r_hi,
                            bool omit_reaction_term = false);

/// Comparison principle probe: evolve two profiles with ordered initial and
/// boundary data under the same options and report the worst ordering
/// violation max(lower - upper) seen at any step.
struct OrderingReport {
    bool ordered = false;  // violation never exceeded 1e-9
    double max_violation = 0.0;
    double violation_time = 0.0;
};

OrderingReport ordering_check(const ode::RadialProfile& lower, const ode::RadialProfile& upper,
                              const FlowOptions& options, double t_final);

} // namespace expanderlab::flow
