#pragma once

#include <string>
#include <vector>

namespace expanderlab::verify {

/// Outcome of one certified property. `measured` is the headline scalar and
/// `tolerance` the bound it was compared against (direction given in
/// `detail`); multi-part checks put the remaining numbers in `detail`.
struct CheckResult {
    int criterion = 0;  // 1-based index in the acceptance list
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteOptions {
    bool quick = false;   // reduced resolution, relaxed tolerances
    int max_threads = 1;  // independent checks may run concurrently
};

// Closed-form entropy and density facts (same resolution in both modes).
CheckResult check_sphere_entropy_value();
CheckResult check_sphere_entropy_chain();
CheckResult check_simons_cone_densities();

// Radial expander solves and their certificates.
CheckResult check_rotational_barriers(bool quick);
CheckResult check_asymptotic_constants(bool quick);
CheckResult check_line_expander_barrier(bool quick);

// Stability functional and operator identities.
CheckResult check_stability_quadrature_match(bool quick);
CheckResult check_instability_detection();
CheckResult check_jacobi_identities();

// Dirichlet disk, flow, translator, monotonicity suites.
CheckResult check_dirichlet_disk(bool quick);
CheckResult check_flow_suite(bool quick);
CheckResult check_translator_suite(bool quick);
CheckResult check_monotonicity_identity(bool quick);

/// All thirteen numeric checks in criterion order. Checks never throw: a
/// solver failure becomes a failed result carrying the diagnostic. With
/// max_threads > 1 the checks run on a small worker pool (they are
/// independent pure computations); the returned order is fixed either way.
std::vector<CheckResult> run_acceptance_suite(const SuiteOptions& options);

} // namespace expanderlab::verify
