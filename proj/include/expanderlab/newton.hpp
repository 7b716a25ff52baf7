#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace expanderlab::num {

struct NewtonOptions {
    double tolerance = 1e-10;  // sup-norm target for the residual
    int max_iterations = 60;
    int max_halvings = 30;     // line-search budget per iteration
};

struct NewtonReport {
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
};

inline double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

/// Damped Newton iteration on x (updated in place).
///   residual(x) -> F(x) as a vector
///   step(x, F)  -> delta solving J(x) delta = -F
/// Each iteration tries the full step and halves it (up to max_halvings)
/// until the residual sup-norm strictly decreases; failure to decrease at
/// the smallest step ends the iteration with converged = false and x at the
/// best iterate seen. No exception is thrown here: callers decide whether a
/// non-converged report is fatal.
template <class Residual, class Step>
NewtonReport newton_damped(std::vector<double>& x, Residual&& residual, Step&& step,
                           const NewtonOptions& opt = {}) {
    NewtonReport report;
    std::vector<double> f = residual(x);
    double fnorm = sup_norm(f);

    for (int it = 0; it < opt.max_iterations; ++it) {
        report.iterations = it;
        report.residual_norm = fnorm;
        if (fnorm <= opt.tolerance) {
            report.converged = true;
            return report;
        }

        const std::vector<double> delta = step(x, f);
        double lambda = 1.0;
        bool accepted = false;
        std::vector<double> trial(x.size());
        for (int h = 0; h <= opt.max_halvings; ++h) {
            for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + lambda * delta[i];
            std::vector<double> ftrial = residual(trial);
            const double tnorm = sup_norm(ftrial);
            if (tnorm < fnorm) {
                x = trial;
                f = std::move(ftrial);
                fnorm = tnorm;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) {
            report.residual_norm = fnorm;
            return report; // stalled: not converged, x holds best iterate
        }
    }

    report.iterations = opt.max_iterations;
    report.residual_norm = fnorm;
    report.converged = fnorm <= opt.tolerance;
    return report;
}

} // namespace expanderlab::num
