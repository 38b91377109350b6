#pragma once

#include <cassert>
#include <cmath>
#include <numbers>
#include <vector>

#include "memopat/errors.hpp"

namespace memopat {

// Per-node samples aligned with a Grid (length n_cells + 1).
using Field = std::vector<double>;

// Uniform node-based mesh on [0, pi] including both endpoints.  The cosine
// modes cos(n x) are exactly representable at the nodes, which keeps the
// mode-resolved tests and the spectral identities of the difference
// operators crisp.  n_cells must be even so that no mode sits exactly at
// the grid Nyquist with alternating-sign phase bias.
struct Grid {
    int n_cells = 0;
    double h = 0.0;
    std::vector<double> node; // x_i = i*h, i = 0..n_cells

    explicit Grid(int cells) : n_cells(cells) {
        if (cells < 8 || cells % 2 != 0)
            throw ValidationError("grid: n_cells must be even and >= 8, got " +
                                  std::to_string(cells));
        h = std::numbers::pi / cells;
        node.resize(cells + 1);
        for (int i = 0; i <= cells; ++i)
            node[i] = i * h;
    }

    int n_nodes() const { return n_cells + 1; }
};

// Composite trapezoid rule over [0, pi] for a per-node field.
inline double trapezoid(const Field& f, const Grid& g) {
    assert((int)f.size() == g.n_nodes());
    double s = 0.5 * (f.front() + f.back());
    for (int i = 1; i < g.n_cells; ++i)
        s += f[i];
    return s * g.h;
}

// Domain average (1/pi) * integral.
inline double mean_value(const Field& f, const Grid& g) {
    return trapezoid(f, g) / std::numbers::pi;
}

} // namespace memopat
