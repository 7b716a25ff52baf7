#include "expanderlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expanderlab::num {

Grid1D Grid1D::uniform(double a, double b, std::size_t node_count) {
    if (!(b > a)) throw std::invalid_argument("Grid1D::uniform: need b > a");
    if (node_count < 3) throw std::invalid_argument("Grid1D::uniform: need at least 3 nodes");
    std::vector<double> nodes(node_count);
    const double h = (b - a) / static_cast<double>(node_count - 1);
    for (std::size_t i = 0; i < node_count; ++i) nodes[i] = a + h * static_cast<double>(i);
    nodes.back() = b; // exact endpoint regardless of rounding
    return Grid1D(std::move(nodes));
}

Grid1D::Grid1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
    for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
        if (!(nodes_[i + 1] > nodes_[i]))
            throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
    }
}

bool Grid1D::is_uniform(double rel_tol) const {
    const double h0 = spacing(0);
    for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
        if (std::abs(spacing(i) - h0) > rel_tol * std::abs(h0)) return false;
    }
    return true;
}

std::size_t Grid1D::interval_of(double x) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    if (it == nodes_.begin()) return 0;
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return std::min(i, nodes_.size() - 2);
}

} // namespace expanderlab::num
