#include "expanderlab/disk_solver.hpp"

#include "expanderlab/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace expanderlab::graph {

namespace {

constexpr double kMinArmFraction = 1e-4;

// One stencil arm. Either it reaches a neighbouring unknown node (known ==
// false, nbr is the grid index) or it was shortened to its crossing with the
// circle, where the Dirichlet datum enters (known == true, value cached).
struct Arm {
    double dist = 0.0;
    bool known = false;
    std::size_t nbr = 0;
    double value = 0.0;
};

// Per-unknown stencil: axis arm pairs, both diagonal pairs (the quasilinear
// mixed term picks one diagonal per iteration, the sparsity keeps both), and
// the node location. Geometry and boundary values are fixed once V is fixed.
struct Stencil {
    std::size_t node = 0;
    double x = 0.0;
    double y = 0.0;
    Arm east, west, north, south;
    Arm ne, sw, nw, se;  // diagonals (+1,+1),(-1,-1),(-1,+1),(+1,-1)
};

struct Mesh {
    double R = 0.0;
    double h = 0.0;
    std::size_t side = 0;
    std::vector<double> coords;
    std::vector<std::uint8_t> unknown;      // node is a solver unknown
    std::vector<std::ptrdiff_t> eq;         // node -> unknown index or -1
    std::vector<Stencil> stencils;          // one per unknown
};

std::size_t node_index(const Mesh& m, std::size_t i, std::size_t j) { return j * m.side + i; }

// Nodes within kMinArmFraction*h of the circle are kept as data nodes, not
// unknowns; arms from their neighbours run straight to the circle instead.
bool is_unknown_node(const Mesh& m, std::size_t i, std::size_t j) {
    const double r = std::hypot(m.coords[i], m.coords[j]);
    return r < m.R - kMinArmFraction * m.h;
}

Arm make_arm(const Mesh& m, const BoundaryData& V, std::size_t i, std::size_t j, int di, int dj) {
    const double x = m.coords[i];
    const double y = m.coords[j];
    const double len = std::hypot(static_cast<double>(di), static_cast<double>(dj));
    const double step = m.h * len;
    const std::size_t ni = i + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(di));
    const std::size_t nj = j + static_cast<std::size_t>(static_cast<std::ptrdiff_t>(dj));
    const std::size_t nnode = node_index(m, ni, nj);
    if (m.unknown[nnode]) return Arm{step, false, nnode, 0.0};

    // Circle crossing from (x, y) along the unit arm direction: the positive
    // root of |P + s v|^2 = R^2 (it exists because the node itself is inside).
    const double vx = di / len;
    const double vy = dj / len;
    const double pv = x * vx + y * vy;
    const double disc = pv * pv + m.R * m.R - (x * x + y * y);
    double s = -pv + std::sqrt(std::max(disc, 0.0));
    s = std::min(s, step);
    double bx = x + s * vx;
    double by = y + s * vy;
    const double nb = std::hypot(bx, by);
    if (nb > 0.0) {
        bx *= m.R / nb;
        by *= m.R / nb;
    }
    const double dist = std::max(s, kMinArmFraction * step);
    return Arm{dist, true, 0, V(bx, by)};
}

Mesh build_mesh(double R, std::size_t side, const BoundaryData& V) {
    Mesh m;
    m.R = R;
    m.side = side;
    m.h = 2.0 * R / static_cast<double>(side - 1);
    m.coords.resize(side);
    for (std::size_t i = 0; i < side; ++i) m.coords[i] = -R + static_cast<double>(i) * m.h;
    // Mirror so the grid is exactly symmetric (symmetric data then produce
    // exactly symmetric discrete systems).
    for (std::size_t i = 0; i < side / 2; ++i) m.coords[side - 1 - i] = -m.coords[i];
    if (side % 2 == 1) m.coords[side / 2] = 0.0;

    m.unknown.assign(side * side, 0);
    m.eq.assign(side * side, -1);
    std::size_t count = 0;
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i)
            if (is_unknown_node(m, i, j)) {
                m.unknown[node_index(m, i, j)] = 1;
                m.eq[node_index(m, i, j)] = static_cast<std::ptrdiff_t>(count++);
            }

    m.stencils.resize(count);
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i) {
            const std::size_t node = node_index(m, i, j);
            if (!m.unknown[node]) continue;
            Stencil st;
            st.node = node;
            st.x = m.coords[i];
            st.y = m.coords[j];
            st.east = make_arm(m, V, i, j, +1, 0);
            st.west = make_arm(m, V, i, j, -1, 0);
            st.north = make_arm(m, V, i, j, 0, +1);
            st.south = make_arm(m, V, i, j, 0, -1);
            st.ne = make_arm(m, V, i, j, +1, +1);
            st.sw = make_arm(m, V, i, j, -1, -1);
            st.nw = make_arm(m, V, i, j, -1, +1);
            st.se = make_arm(m, V, i, j, +1, -1);
            m.stencils[static_cast<std::size_t>(m.eq[node])] = st;
        }
    return m;
}

double arm_value(const Arm& a, const std::vector<double>& values) {
    return a.known ? a.value : values[a.nbr];
}

// Three-point first and second derivatives on unequal arms (exact on
// quadratics): plus/minus are the values at distances dp/dm from the center.
double first_diff(double dp, double dm, double up, double um, double uc) {
    return (dm * dm * up - dp * dp * um + (dp * dp - dm * dm) * uc) / (dp * dm * (dp + dm));
}

double second_diff(double dp, double dm, double up, double um, double uc) {
    return 2.0 * (dm * up + dp * um - (dp + dm) * uc) / (dp * dm * (dp + dm));
}

// Everything the assembly needs at one node for the current iterate.
struct NodeState {
    double p1 = 0.0, p2 = 0.0;        // gradient
    double g11 = 0.0, g22 = 0.0, g12 = 0.0;
    double sgn = 1.0;                  // active diagonal: sign of g12
    double X = 0.0, Y = 0.0, D = 0.0;  // second differences (xx, yy, active diagonal)
    double residual = 0.0;
};

NodeState node_state(const Stencil& st, const std::vector<double>& values) {
    NodeState ns;
    const double uc = values[st.node];
    const double ue = arm_value(st.east, values);
    const double uw = arm_value(st.west, values);
    const double un = arm_value(st.north, values);
    const double us = arm_value(st.south, values);

    ns.p1 = first_diff(st.east.dist, st.west.dist, ue, uw, uc);
    ns.p2 = first_diff(st.north.dist, st.south.dist, un, us, uc);
    const double w2 = 1.0 + ns.p1 * ns.p1 + ns.p2 * ns.p2;
    ns.g11 = 1.0 - ns.p1 * ns.p1 / w2;
    ns.g22 = 1.0 - ns.p2 * ns.p2 / w2;
    ns.g12 = -ns.p1 * ns.p2 / w2;
    ns.sgn = ns.g12 < 0.0 ? -1.0 : 1.0;

    ns.X = second_diff(st.east.dist, st.west.dist, ue, uw, uc);
    ns.Y = second_diff(st.north.dist, st.south.dist, un, us, uc);
    const Arm& dp = ns.sgn > 0.0 ? st.ne : st.nw;
    const Arm& dm = ns.sgn > 0.0 ? st.sw : st.se;
    ns.D = second_diff(dp.dist, dm.dist, arm_value(dp, values), arm_value(dm, values), uc);

    // g11 u_xx + g22 u_yy + 2 g12 u_xy with the mixed term routed through the
    // second difference along the diagonal matching the sign of g12:
    //   2 g12 u_xy = |g12| (2 u_dd - u_xx - u_yy).
    const double a12 = std::abs(ns.g12);
    ns.residual = (ns.g11 - a12) * ns.X + (ns.g22 - a12) * ns.Y + 2.0 * a12 * ns.D +
                  0.5 * (st.x * ns.p1 + st.y * ns.p2) - 0.5 * uc;
    return ns;
}

double residual_sup(const Mesh& m, const std::vector<double>& values) {
    double sup = 0.0;
    for (const Stencil& st : m.stencils) sup = std::max(sup, std::abs(node_state(st, values).residual));
    return sup;
}

using Triplet = Eigen::Triplet<double>;

// Adds c * (derivative weight) for each end of an arm pair plus the center.
// Known (circle) arms contribute to the right-hand side only when rhs_known
// is non-null (frozen-coefficient sweeps); Newton rows drop them because the
// Dirichlet data does not vary.
struct RowBuilder {
    std::vector<Triplet>& triplets;
    int row;
    const Mesh& mesh;
    double* rhs_known = nullptr;
    double center = 0.0;

    void add(const Arm& a, double w) {
        if (a.known) {
            if (rhs_known != nullptr) *rhs_known -= w * a.value;
        } else {
            triplets.emplace_back(row, static_cast<int>(mesh.eq[a.nbr]), w);
        }
    }

    void pair_first(const Arm& plus, const Arm& minus, double c) {
        const double dp = plus.dist, dm = minus.dist;
        const double den = dp * dm * (dp + dm);
        add(plus, c * dm * dm / den);
        add(minus, -c * dp * dp / den);
        center += c * (dp * dp - dm * dm) / den;
    }

    void pair_second(const Arm& plus, const Arm& minus, double c) {
        const double dp = plus.dist, dm = minus.dist;
        const double den = dp * dm * (dp + dm);
        add(plus, c * 2.0 * dm / den);
        add(minus, c * 2.0 * dp / den);
        center += -c * 2.0 * (dp + dm) / den;
    }
};

// dg^{ab}/dp_k for g = id - p p^T / (1 + |p|^2), used by the Newton rows.
struct MetricDerivatives {
    double g11_p1, g11_p2, g22_p1, g22_p2, g12_p1, g12_p2;
};

MetricDerivatives metric_derivatives(double p1, double p2) {
    const double w2 = 1.0 + p1 * p1 + p2 * p2;
    const double w4 = w2 * w2;
    MetricDerivatives d;
    d.g11_p1 = -2.0 * p1 * (1.0 + p2 * p2) / w4;
    d.g11_p2 = 2.0 * p1 * p1 * p2 / w4;
    d.g22_p1 = 2.0 * p2 * p2 * p1 / w4;
    d.g22_p2 = -2.0 * p2 * (1.0 + p1 * p1) / w4;
    d.g12_p1 = -p2 * (1.0 + p2 * p2 - p1 * p1) / w4;
    d.g12_p2 = -p1 * (1.0 + p1 * p1 - p2 * p2) / w4;
    return d;
}

enum class AssemblyMode { FrozenCoefficients, Newton };

// Frozen mode: rows of the linear operator with coefficients evaluated at the
// current iterate, boundary data moved to the right-hand side; solving gives
// the next sweep iterate directly. Newton mode: exact Jacobian rows of the
// discrete residual, right-hand side -F.
void assemble(const Mesh& m, const std::vector<double>& values, AssemblyMode mode,
              std::vector<Triplet>& triplets, Eigen::VectorXd& rhs) {
    const std::size_t n = m.stencils.size();
    triplets.clear();
    rhs.resize(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const Stencil& st = m.stencils[k];
        const NodeState ns = node_state(st, values);
        const double a12 = std::abs(ns.g12);
        const int row = static_cast<int>(k);

        double rhs_k = 0.0;
        const bool frozen = mode == AssemblyMode::FrozenCoefficients;
        RowBuilder rb{triplets, row, m, frozen ? &rhs_k : nullptr, 0.0};

        rb.pair_second(st.east, st.west, ns.g11 - a12);
        rb.pair_second(st.north, st.south, ns.g22 - a12);
        const Arm& dplus = ns.sgn > 0.0 ? st.ne : st.nw;
        const Arm& dminus = ns.sgn > 0.0 ? st.sw : st.se;
        rb.pair_second(dplus, dminus, 2.0 * a12);
        // Keep the inactive diagonal in the sparsity pattern so it stays
        // identical across iterations and the symbolic factorization is reused.
        const Arm& iplus = ns.sgn > 0.0 ? st.nw : st.ne;
        const Arm& iminus = ns.sgn > 0.0 ? st.se : st.sw;
        if (!iplus.known) triplets.emplace_back(row, static_cast<int>(m.eq[iplus.nbr]), 0.0);
        if (!iminus.known) triplets.emplace_back(row, static_cast<int>(m.eq[iminus.nbr]), 0.0);

        double cx = 0.5 * st.x;
        double cy = 0.5 * st.y;
        if (mode == AssemblyMode::Newton) {
            // Coefficient sensitivity: d/dp_k of (g11-|g12|) X + (g22-|g12|) Y
            // + 2|g12| D, with d|g12| = sign(g12) dg12.
            const MetricDerivatives md = metric_derivatives(ns.p1, ns.p2);
            const double s = ns.sgn;
            cx += (md.g11_p1 - s * md.g12_p1) * ns.X + (md.g22_p1 - s * md.g12_p1) * ns.Y +
                  2.0 * s * md.g12_p1 * ns.D;
            cy += (md.g11_p2 - s * md.g12_p2) * ns.X + (md.g22_p2 - s * md.g12_p2) * ns.Y +
                  2.0 * s * md.g12_p2 * ns.D;
        }
        rb.pair_first(st.east, st.west, cx);
        rb.pair_first(st.north, st.south, cy);
        rb.center += -0.5;
        triplets.emplace_back(row, row, rb.center);

        rhs(static_cast<Eigen::Index>(row)) = frozen ? rhs_k : -ns.residual;
    }
}

void check_boundary_data(const BoundaryData& V, double lipschitz, double R) {
    if (!V) throw std::invalid_argument("disk solver: boundary data callable is empty");
    const double v0 = V(0.0, 0.0);
    if (!std::isfinite(v0) || std::abs(v0) > 1e-9 * std::max(1.0, lipschitz))
        throw std::invalid_argument("disk solver: boundary data does not vanish at the origin");

    constexpr int samples = 256;
    const double two_pi = 2.0 * std::numbers::pi;
    double prev = 0.0;
    double first = 0.0;
    const double chord = 2.0 * std::sin(std::numbers::pi / samples);
    for (int k = 0; k < samples; ++k) {
        const double t = two_pi * k / samples;
        const double cx = std::cos(t);
        const double cy = std::sin(t);
        const double v = V(cx, cy);
        if (!std::isfinite(v)) throw std::invalid_argument("disk solver: boundary data is not finite");
        if (std::abs(v) > lipschitz * (1.0 + 1e-9) + 1e-12)
            throw std::invalid_argument("disk solver: boundary data exceeds its declared Lipschitz constant");
        for (double scale : {0.37, R}) {
            const double vs = V(scale * cx, scale * cy);
            if (std::abs(vs - scale * v) > 1e-8 * (1.0 + scale * std::abs(v)))
                throw std::invalid_argument("disk solver: boundary data is not 1-homogeneous");
        }
        if (k > 0 && std::abs(v - prev) > lipschitz * chord * (1.0 + 1e-6) + 1e-12)
            throw std::invalid_argument("disk solver: boundary data violates its declared Lipschitz constant");
        if (k == 0) first = v;
        prev = v;
    }
    if (std::abs(first - prev) > lipschitz * chord * (1.0 + 1e-6) + 1e-12)
        throw std::invalid_argument("disk solver: boundary data violates its declared Lipschitz constant");
}

} // namespace

GraphField solve_dirichlet_disk(const BoundaryData& V, double lipschitz, double R,
                                std::size_t nodes_per_side, const DiskSolveOptions& options) {
    if (!(R > 0.0) || !(lipschitz > 0.0))
        throw std::invalid_argument("disk solver: R and the Lipschitz constant must be positive");
    if (nodes_per_side < 9) throw std::invalid_argument("disk solver: need at least 9 nodes per side");
    if (!(options.residual_tolerance > 0.0) || options.max_iterations < 1)
        throw std::invalid_argument("disk solver: invalid solve options");
    if (options.validate_boundary) check_boundary_data(V, lipschitz, R);

    Mesh mesh = build_mesh(R, nodes_per_side, V);
    const std::size_t n = mesh.stencils.size();
    if (n == 0) throw std::invalid_argument("disk solver: grid too coarse, no interior nodes");

    // Seed with the 1-homogeneous extension of the data; it matches the
    // boundary values and has the solution's linear growth.
    std::vector<double> values(mesh.side * mesh.side, 0.0);
    double umax = 0.0;
    for (std::size_t j = 0; j < mesh.side; ++j)
        for (std::size_t i = 0; i < mesh.side; ++i) {
            const double v = V(mesh.coords[i], mesh.coords[j]);
            values[node_index(mesh, i, j)] = v;
            umax = std::max(umax, std::abs(v));
        }

    // Second differences divide rounding noise of size eps*(1+|u|) by h^2;
    // below this floor the residual cannot be driven reliably (the 9-point
    // rows sum ~4 second differences, hence the large safety factor).
    const double floor = 32.0 * std::numeric_limits<double>::epsilon() * (1.0 + umax) / (mesh.h * mesh.h);
    const double tol = std::max(options.residual_tolerance, floor);

    Eigen::SparseMatrix<double> A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd rhs;
    std::vector<Triplet> triplets;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    bool pattern_ready = false;

    double resid = residual_sup(mesh, values);
    int stalled = 0;
    for (int iter = 0; iter < options.max_iterations && resid > tol; ++iter) {
        const bool newton = resid <= options.newton_threshold || stalled >= 4;
        assemble(mesh, values, newton ? AssemblyMode::Newton : AssemblyMode::FrozenCoefficients,
                 triplets, rhs);
        A.setFromTriplets(triplets.begin(), triplets.end());
        if (!pattern_ready) {
            lu.analyzePattern(A);
            pattern_ready = true;
        }
        lu.factorize(A);
        if (lu.info() != Eigen::Success)
            throw SolveError("disk solver: sparse factorization failed", resid, iter);
        const Eigen::VectorXd sol = lu.solve(rhs);

        // Turn both modes into an additive update so one backtracking loop
        // covers them: frozen sweeps propose u_new = sol, Newton proposes
        // u + sol.
        std::vector<double> direction(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double target = sol(static_cast<Eigen::Index>(k));
            const double current = values[mesh.stencils[k].node];
            direction[k] = newton ? target : target - current;
        }

        double alpha = 1.0;
        std::vector<double> trial = values;
        double trial_resid = resid;
        for (int halving = 0; halving <= 8; ++halving) {
            for (std::size_t k = 0; k < n; ++k)
                trial[mesh.stencils[k].node] = values[mesh.stencils[k].node] + alpha * direction[k];
            trial_resid = residual_sup(mesh, trial);
            if (trial_resid < resid * (1.0 - 1e-3) || trial_resid <= tol) break;
            alpha *= 0.5;
        }
        if (trial_resid < resid * (1.0 - 1e-3) || trial_resid <= tol) {
            values.swap(trial);
            resid = trial_resid;
            stalled = 0;
        } else if (trial_resid < resid) {
            values.swap(trial);
            resid = trial_resid;
            ++stalled;
        } else {
            ++stalled;
        }
        if (stalled >= 8)
            throw SolveError("disk solver: iteration stalled above tolerance", resid, iter + 1);
    }
    if (resid > tol)
        throw SolveError("disk solver: residual tolerance not reached", resid, options.max_iterations);

    GraphField field;
    field.R = R;
    field.h = mesh.h;
    field.side = mesh.side;
    field.coords = std::move(mesh.coords);
    field.inside = std::move(mesh.unknown);
    field.values = std::move(values);
    field.lipschitz = lipschitz;
    return field;
}

double disk_residual_sup(const GraphField& field, const BoundaryData& V) {
    const Mesh mesh = build_mesh(field.R, field.side, V);
    return residual_sup(mesh, field.values);
}

UniquenessReport uniqueness_estimate_check(const GraphField& field, const BoundaryData& V) {
    if (field.R < 10.0)
        throw std::invalid_argument("uniqueness check: needs a solved field with R >= 10");
    UniquenessReport report;
    report.bound = 3.0 * field.lipschitz + 2.0;  // (n+1) l + 2 at n = 2
    for (std::size_t j = 0; j < field.side; ++j)
        for (std::size_t i = 0; i < field.side; ++i) {
            const std::size_t node = field.index(i, j);
            if (!field.inside[node]) continue;
            const double x = field.coords[i];
            const double y = field.coords[j];
            const double r = std::hypot(x, y);
            if (r < 2.0 || r > 0.5 * field.R) continue;
            const double gap = std::abs(field.values[node] - V(x, y)) * std::max(1.0, r);
            if (gap > report.worst_weighted_gap) {
                report.worst_weighted_gap = gap;
                report.worst_radius = r;
            }
        }
    report.certified = report.worst_weighted_gap <= 1.1 * report.bound;
    return report;
}

DiskOrderingReport comparison_ordering(const BoundaryData& lower, const BoundaryData& upper,
                                       double lipschitz, double R, std::size_t nodes_per_side,
                                       const DiskSolveOptions& options) {
    constexpr int samples = 720;
    for (int k = 0; k < samples; ++k) {
        const double t = 2.0 * std::numbers::pi * k / samples;
        const double lo = lower(R * std::cos(t), R * std::sin(t));
        const double hi = upper(R * std::cos(t), R * std::sin(t));
        if (lo > hi + 1e-9 * (1.0 + std::abs(hi)))
            throw std::invalid_argument("comparison check: data are not ordered on the circle");
    }
    const GraphField lo = solve_dirichlet_disk(lower, lipschitz, R, nodes_per_side, options);
    const GraphField hi = solve_dirichlet_disk(upper, lipschitz, R, nodes_per_side, options);
    DiskOrderingReport report;
    for (std::size_t node = 0; node < lo.values.size(); ++node) {
        if (!lo.inside[node]) continue;
        report.max_violation = std::max(report.max_violation, lo.values[node] - hi.values[node]);
    }
    report.ordered = report.max_violation <= 1e-9;
    return report;
}

namespace {

// Streaming log-sum-exp: keeps total = exp(shift) * sum with all summands
// non-negative, so quadrature can proceed even when exp(|X|^2/4) overflows.
struct ScaledSum {
    double shift = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    bool overflow_regime = false;

    void add(double amplitude, double exponent) {
        if (amplitude <= 0.0) return;
        if (exponent > 700.0) overflow_regime = true;
        if (exponent <= shift) {
            sum += amplitude * std::exp(exponent - shift);
        } else {
            sum = sum * std::exp(shift - exponent) + amplitude;
            shift = exponent;
        }
    }

    WeightedArea finish() const {
        WeightedArea out;
        if (sum <= 0.0) return out;
        out.log_value = shift + std::log(sum);
        out.value = std::exp(out.log_value);
        out.log_scale = overflow_regime;
        return out;
    }
};

// Area of disk(R) ∩ [0,a]x[0,b] with a,b >= 0, via the antiderivative
// F(t) = (t sqrt(R^2-t^2) + R^2 asin(t/R)) / 2 of sqrt(R^2 - x^2).
double quarter_box_area(double R, double a, double b) {
    a = std::min(a, R);
    b = std::min(b, R);
    if (a <= 0.0 || b <= 0.0) return 0.0;
    if (a * a + b * b <= R * R) return a * b;
    const auto F = [R](double t) {
        t = std::clamp(t, 0.0, R);
        return 0.5 * (t * std::sqrt(std::max(R * R - t * t, 0.0)) + R * R * std::asin(t / R));
    };
    const double c = std::sqrt(std::max(R * R - b * b, 0.0));  // where the arc meets height b
    return b * std::min(a, c) + (a > c ? F(a) - F(c) : 0.0);
}

double signed_corner_area(double R, double x, double y) {
    const double s = (x < 0.0 ? -1.0 : 1.0) * (y < 0.0 ? -1.0 : 1.0);
    return s * quarter_box_area(R, std::abs(x), std::abs(y));
}

double cell_disk_overlap(double R, double x0, double x1, double y0, double y1) {
    return signed_corner_area(R, x1, y1) - signed_corner_area(R, x0, y1) -
           signed_corner_area(R, x1, y0) + signed_corner_area(R, x0, y0);
}

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGauss4X[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGauss4W[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                0.3478548451374538};

struct BilinearCell {
    double x0, y0, h;
    double u00, u10, u01, u11;

    void eval(double x, double y, double& u, double& ux, double& uy) const {
        const double t = (x - x0) / h;
        const double v = (y - y0) / h;
        u = (1.0 - t) * (1.0 - v) * u00 + t * (1.0 - v) * u10 + (1.0 - t) * v * u01 + t * v * u11;
        ux = ((1.0 - v) * (u10 - u00) + v * (u11 - u01)) / h;
        uy = ((1.0 - t) * (u01 - u00) + t * (u11 - u10)) / h;
    }
};

void accumulate_point(ScaledSum& acc, const BilinearCell& cell, double x, double y, double w) {
    double u, ux, uy;
    cell.eval(x, y, u, ux, uy);
    const double area_factor = std::sqrt(1.0 + ux * ux + uy * uy);
    acc.add(w * area_factor, 0.25 * (x * x + y * y + u * u));
}

// Exact-geometry quadrature over cell ∩ disk: split the x-range where the
// arc crosses the cell's horizontal edges, then Gauss in x and, per x node,
// Gauss in y over the exact chord section. The disk is convex, so every
// vertical section of the overlap is a single interval.
void integrate_cut_cell(ScaledSum& acc, const BilinearCell& cell, double R, double x1, double y1) {
    double breaks[6];
    int nb = 0;
    breaks[nb++] = cell.x0;
    for (double yedge : {cell.y0, y1}) {
        const double d = R * R - yedge * yedge;
        if (d > 0.0) {
            const double xa = std::sqrt(d);
            if (-xa > cell.x0 && -xa < x1) breaks[nb++] = -xa;
            if (xa > cell.x0 && xa < x1) breaks[nb++] = xa;
        }
    }
    breaks[nb++] = x1;
    std::sort(breaks, breaks + nb);

    for (int seg = 0; seg + 1 < nb; ++seg) {
        const double a = breaks[seg];
        const double b = breaks[seg + 1];
        if (b - a <= 1e-15 * R) continue;
        const double xm = 0.5 * (a + b);
        const double xr = 0.5 * (b - a);
        for (int qx = 0; qx < 4; ++qx) {
            const double x = xm + xr * kGauss4X[qx];
            const double d = R * R - x * x;
            if (d <= 0.0) continue;
            const double chord = std::sqrt(d);
            const double ylo = std::max(cell.y0, -chord);
            const double yhi = std::min(y1, chord);
            if (yhi <= ylo) continue;
            const double ym = 0.5 * (ylo + yhi);
            const double yr = 0.5 * (yhi - ylo);
            for (int qy = 0; qy < 4; ++qy) {
                const double y = ym + yr * kGauss4X[qy];
                accumulate_point(acc, cell, x, y, xr * kGauss4W[qx] * yr * kGauss4W[qy]);
            }
        }
    }
}

} // namespace

WeightedArea weighted_area(const GraphField& field) {
    if (field.side < 2 || field.values.size() != field.side * field.side)
        throw std::invalid_argument("weighted area: field is not a solved grid");
    const double R = field.R;
    ScaledSum acc;
    constexpr double g2 = 0.5773502691896258;  // 2-point Gauss abscissa
    for (std::size_t j = 0; j + 1 < field.side; ++j)
        for (std::size_t i = 0; i + 1 < field.side; ++i) {
            const double x0 = field.coords[i];
            const double x1 = field.coords[i + 1];
            const double y0 = field.coords[j];
            const double y1 = field.coords[j + 1];
            const double h = x1 - x0;
            const double overlap = cell_disk_overlap(R, x0, x1, y0, y1);
            if (overlap <= 1e-14 * h * h) continue;
            const BilinearCell cell{x0,
                                    y0,
                                    h,
                                    field.values[field.index(i, j)],
                                    field.values[field.index(i + 1, j)],
                                    field.values[field.index(i, j + 1)],
                                    field.values[field.index(i + 1, j + 1)]};
            if (overlap >= h * h * (1.0 - 1e-14)) {
                const double w = 0.25 * h * h;
                for (double sx : {-g2, g2})
                    for (double sy : {-g2, g2})
                        accumulate_point(acc, cell, x0 + 0.5 * h * (1.0 + sx),
                                         y0 + 0.5 * h * (1.0 + sy), w);
            } else {
                integrate_cut_cell(acc, cell, R, x1, y1);
            }
        }
    return acc.finish();
}

WeightedArea weighted_area(const ode::RadialProfile& profile) {
    const std::size_t n = profile.size();
    if (n < 5 || !profile.grid.is_uniform(1e-9))
        throw std::invalid_argument("weighted area: profile needs a uniform grid with >= 5 nodes");
    const int dim = profile.dimension;
    if (dim < 1) throw std::invalid_argument("weighted area: profile dimension must be >= 1");

    // Surface integrand over the radial graph: |S^{dim-1}| r^{dim-1}
    // sqrt(1+u'^2) exp((r^2+u^2)/4), integrated with composite Simpson on the
    // profile's own nodes after factoring out the peak exponent.
    std::vector<double> amplitude(n);
    std::vector<double> exponent(n);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = profile.grid[i];
        const double u = profile.values[i];
        const double du = profile_derivative(profile, i);
        amplitude[i] = std::pow(r, dim - 1) * std::sqrt(1.0 + du * du);
        exponent[i] = 0.25 * (r * r + u * u);
        peak = std::max(peak, exponent[i]);
    }

    const double h = profile.grid.spacing(0);
    const auto scaled = [&](std::size_t i) { return amplitude[i] * std::exp(exponent[i] - peak); };

    std::size_t intervals = n - 1;
    double integral = 0.0;
    std::size_t i = 0;
    if (intervals % 2 == 1) {  // 3/8 rule on the first three intervals
        integral += 3.0 * h / 8.0 * (scaled(0) + 3.0 * scaled(1) + 3.0 * scaled(2) + scaled(3));
        i = 3;
    }
    for (; i + 2 <= n - 1; i += 2)
        integral += h / 3.0 * (scaled(i) + 4.0 * scaled(i + 1) + scaled(i + 2));

    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
    WeightedArea out;
    if (integral <= 0.0) return out;
    out.log_value = peak + std::log(integral * sphere);
    out.value = std::exp(out.log_value);
    out.log_scale = peak > 700.0;
    return out;
}

MinimalityReport minimality_check(const GraphField& field, int bump_count, std::uint64_t seed) {
    if (bump_count < 1) throw std::invalid_argument("minimality check: bump count must be positive");
    if (field.side < 41)
        throw std::invalid_argument("minimality check: grid too coarse for resolved bumps");

    MinimalityReport report;
    report.bump_count = bump_count;
    report.seed = seed;
    report.area = weighted_area(field).value;
    report.worst_drop = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    GraphField bumped = field;
    for (int b = 0; b < bump_count; ++b) {
        const double radius = field.R * (0.15 + 0.15 * unit(rng));
        const double center_max = std::max(0.0, field.R - radius - 2.0 * field.h);
        const double rho = center_max * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        const double cx = rho * std::cos(phi);
        const double cy = rho * std::sin(phi);
        const double amp = (0.05 + 0.25 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);

        bumped.values = field.values;
        for (std::size_t j = 0; j < field.side; ++j)
            for (std::size_t i = 0; i < field.side; ++i) {
                const std::size_t node = field.index(i, j);
                if (!field.inside[node]) continue;
                const double dx = field.coords[i] - cx;
                const double dy = field.coords[j] - cy;
                const double q = (dx * dx + dy * dy) / (radius * radius);
                if (q >= 1.0) continue;
                bumped.values[node] += amp * std::exp(1.0 - 1.0 / (1.0 - q));
            }
        const double perturbed = weighted_area(bumped).value;
        report.worst_drop = std::min(report.worst_drop, perturbed - report.area);
    }
    report.minimal = report.worst_drop >= -1e-9 * report.area;
    return report;
}

} // namespace expanderlab::graph
