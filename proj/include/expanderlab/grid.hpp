#pragma once

#include <cstddef>
#include <vector>

namespace expanderlab::num {

/// Strictly increasing 1-D node set. Construction validates ordering; all
/// solvers in this project assume at least three nodes.
class Grid1D {
public:
    static Grid1D uniform(double a, double b, std::size_t node_count);

    explicit Grid1D(std::vector<double> nodes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double operator[](std::size_t i) const { return nodes_[i]; }
    double front() const { return nodes_.front(); }
    double back() const { return nodes_.back(); }

    /// Spacing of interval i, i.e. node i+1 minus node i.
    double spacing(std::size_t i) const { return nodes_[i + 1] - nodes_[i]; }

    bool is_uniform(double rel_tol = 1e-12) const;

    /// Largest index i with node(i) <= x, clamped to [0, size()-2].
    std::size_t interval_of(double x) const;

private:
    std::vector<double> nodes_;
};

} // namespace expanderlab::num
