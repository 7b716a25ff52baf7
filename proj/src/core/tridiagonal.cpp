#include "expanderlab/tridiagonal.hpp"

#include "expanderlab/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace expanderlab::num {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("solve_tridiagonal: empty system");
    if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent band sizes");

    std::vector<double> c(n - 1), d(n);
    double pivot = diag[0];
    double scale = std::abs(diag[0]) + (n > 1 ? std::abs(upper[0]) : 0.0);
    if (std::abs(pivot) <= 1e-14 * scale || pivot == 0.0)
        throw SolveError("solve_tridiagonal: zero pivot at row 0", std::abs(pivot), 0);
    if (n > 1) c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;

    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        scale = std::abs(diag[i]) + std::abs(lower[i - 1]) + (i + 1 < n ? std::abs(upper[i]) : 0.0);
        if (std::abs(pivot) <= 1e-14 * scale || pivot == 0.0)
            throw SolveError("solve_tridiagonal: zero pivot", std::abs(pivot), static_cast<int>(i));
        if (i + 1 < n) c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }

    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

} // namespace expanderlab::num
