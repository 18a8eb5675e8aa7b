#pragma once

#include <cstddef>
#include <stdexcept>

namespace subdiff {

/// Uniform grid on (0,1) with homogeneous Dirichlet ends.
/// Unknowns live at the interior nodes x_i = i*h, i = 1..cells-1.
struct Mesh1d {
    std::size_t cells = 0; // number of subintervals M
    double h = 0.0;        // 1.0 / cells

    explicit Mesh1d(std::size_t m) : cells(m), h(1.0 / static_cast<double>(m)) {
        if (m < 2) throw std::invalid_argument("Mesh1d: need at least 2 subintervals");
    }

    std::size_t dofs() const { return cells - 1; }
    double node(std::size_t i) const { return static_cast<double>(i) * h; } // i = 0..cells
};

} // namespace subdiff
