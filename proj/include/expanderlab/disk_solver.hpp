#pragma once

#include "expanderlab/radial_profile.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace expanderlab::graph {

/// Boundary data for the disk problem: a 1-homogeneous Lipschitz function
/// on R^2. The solver evaluates it on the circle |x| = R (Dirichlet data at
/// stencil-arm crossings) and through the origin-scaled form |x| V(x/|x|)
/// for seeds and node extensions, so only the values on directions matter.
using BoundaryData = std::function<double(double, double)>;

struct DiskSolveOptions {
    double residual_tolerance = 1e-8;
    int max_iterations = 60;         // frozen-coefficient + Newton combined
    double newton_threshold = 1e-2;  // switch to Newton below this residual
    bool validate_boundary = true;   // sampled homogeneity + Lipschitz check
};

/// Discrete solution of the graphic self-expander equation on the disk B_R,
///   sum_ij (delta_ij - u_i u_j/(1+|Du|^2)) u_ij + x.Du/2 - u/2 = 0,
/// on a uniform tensor grid over [-R, R]^2. Stencil arms that leave the
/// disk are shortened to their circle crossing, where the Dirichlet datum
/// enters exactly. Node values outside the disk hold the 1-homogeneous
/// extension of the boundary data (used by quadrature and plotting; they
/// are not unknowns).
struct GraphField {
    double R = 0.0;
    double h = 0.0;
    std::size_t side = 0;              // nodes per side
    std::vector<double> coords;        // axis coordinates, size `side`
    std::vector<std::uint8_t> inside;  // size side^2, 1 if strictly inside
    std::vector<double> values;        // size side^2
    double lipschitz = 0.0;

    std::size_t index(std::size_t i, std::size_t j) const { return j * side + i; }
    double x_of(std::size_t i) const { return coords[i]; }
};

/// Frozen-coefficient sweeps on the quasilinear coefficients, switching to
/// damped Newton once the residual falls under newton_threshold. Throws
/// SolveError on non-convergence, std::invalid_argument when the sampled
/// boundary check finds data that is not 1-homogeneous or violates the
/// declared Lipschitz constant.
GraphField solve_dirichlet_disk(const BoundaryData& V, double lipschitz, double R,
                                std::size_t nodes_per_side,
                                const DiskSolveOptions& options = {});

/// Recomputes the sup of the discrete equation residual over interior
/// nodes (the quantity the solver drove below its tolerance).
double disk_residual_sup(const GraphField& field, const BoundaryData& V);

/// Tail-decay certificate on the annulus 2 <= |y| <= R/2: the weighted gap
/// |u - V| * max(1, |y|) stays below ((n+1) l + 2) with 10% slack for the
/// finite-domain truncation.
struct UniquenessReport {
    double worst_weighted_gap = 0.0;
    double worst_radius = 0.0;
    double bound = 0.0;  // (n+1) l + 2 at n = 2
    bool certified = false;
};

UniquenessReport uniqueness_estimate_check(const GraphField& field, const BoundaryData& V);

/// Solves both problems and reports the worst ordering violation
/// max(u_lower - u_upper) over in-disk nodes; data must satisfy
/// lower <= upper on the circle (sampled precondition).
struct DiskOrderingReport {
    double max_violation = 0.0;
    bool ordered = false;  // violation <= 1e-9
};

DiskOrderingReport comparison_ordering(const BoundaryData& lower, const BoundaryData& upper,
                                       double lipschitz, double R,
                                       std::size_t nodes_per_side,
                                       const DiskSolveOptions& options = {});

/// Weighted area  int exp(|X|^2/4) dmu, |X|^2 = |x|^2 + u^2. Full cells use
/// 2x2 Gauss with bilinear node data; cells cut by the circle use their
/// exact circle-rectangle overlap area times a sampled integrand mean. When
/// any exponent exceeds 700 the sum is carried in log space and value is
/// +infinity; log_value is always valid.
struct WeightedArea {
    double value = 0.0;
    double log_value = 0.0;
    bool log_scale = false;
};

WeightedArea weighted_area(const GraphField& field);

/// Rotational counterpart on a radial profile over B_R in R^dimension
/// (adaptive quadrature of the surface integrand, relative target 1e-8).
WeightedArea weighted_area(const ode::RadialProfile& profile);

/// Perturbs the solved field by deterministic pseudo-random interior bumps
/// (compactly supported, smooth, amplitudes in [0.05, 0.3]) and checks the
/// weighted area never drops more than 1e-9 relative below the solution's.
struct MinimalityReport {
    int bump_count = 0;
    double worst_drop = 0.0;  // min over bumps of E(u+b) - E(u)
    double area = 0.0;        // E(u)
    bool minimal = false;
    std::uint64_t seed = 0;
};

MinimalityReport minimality_check(const GraphField& field, int bump_count,
                                  std::uint64_t seed = 20260814);

} // namespace expanderlab::graph
