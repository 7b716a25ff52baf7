#pragma once

#include <stdexcept>
#include <string>

namespace expanderlab {

/// Iterative solver failed to reach its tolerance. Carries the last residual
/// norm so callers can report how far away the iteration stalled.
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& what, double residual_norm, int iterations)
        : std::runtime_error(what), residual_norm_(residual_norm), iterations_(iterations) {}

    double residual_norm() const noexcept { return residual_norm_; }
    int iterations() const noexcept { return iterations_; }

private:
    double residual_norm_ = 0.0;
    int iterations_ = 0;
};

/// Adaptive quadrature ran out of refinement budget. The best estimate is
/// still available; treating it as a value is the caller's decision.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_ = 0.0;
    double error_estimate_ = 0.0;
};

/// A time stepper left the representable regime (gradient or value blew up).
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_ = 0.0;
};

/// A converged solution violated a certified structural property
/// (barrier ordering, sign condition, monotonicity). Always a hard error:
/// such a solution must never be returned as valid.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace expanderlab
