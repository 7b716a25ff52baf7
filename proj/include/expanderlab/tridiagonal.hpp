#pragma once

#include <span>
#include <vector>

namespace expanderlab::num {

/// Thomas algorithm for a tridiagonal system of size n = diag.size().
/// lower and upper have size n-1 (lower[i] couples row i+1 to column i,
/// upper[i] couples row i to column i+1). Throws SolveError when forward
/// elimination meets a pivot that is zero relative to the row scale; the
/// matrices produced by the solvers here are strictly diagonally dominant,
/// so a degenerate pivot always signals a malformed system.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

} // namespace expanderlab::num
