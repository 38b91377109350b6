#include "memopat/elliptic.hpp"

#include <cassert>
#include <cmath>

namespace memopat {

void solve_tridiag_neumann(double diag, double off, Field& x, const Field& rhs,
                           TriDiagWorkspace& ws) {
    const std::size_t n = rhs.size();
    assert(n >= 3);
    ws.resize(n);
    x.resize(n);

    // Row 0 and row n-1 carry 2*off (ghost node folded in); interior rows
    // are (off, diag, off).  Forward elimination:
    ws.c_prime[0] = 2.0 * off / diag;
    ws.d_prime[0] = rhs[0] / diag;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double m = diag - off * ws.c_prime[i - 1];
        ws.c_prime[i] = off / m;
        ws.d_prime[i] = (rhs[i] - off * ws.d_prime[i - 1]) / m;
    }
    {
        const std::size_t i = n - 1;
        const double m = diag - 2.0 * off * ws.c_prime[i - 1];
        ws.c_prime[i] = 0.0;
        ws.d_prime[i] = (rhs[i] - 2.0 * off * ws.d_prime[i - 1]) / m;
    }
    // Back substitution.
    x[n - 1] = ws.d_prime[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        x[i] = ws.d_prime[i] - ws.c_prime[i] * x[i + 1];
}

Field solve_screened(const Field& K, double R, const Grid& grid,
                     TriDiagWorkspace& ws) {
    assert(R > 0.0);
    assert((int)K.size() == grid.n_nodes());
    // Discrete equation per node: V_{i-1} - (2 + h^2/R^2) V_i + V_{i+1}
    //                               = -(h^2/R^2) K_i,
    // ghost closure doubling the off-diagonal at both ends.  The diagonal
    // dominates strictly (|2+h^2/R^2| > 2), so Thomas elimination is safe.
    const double hh_rr = grid.h * grid.h / (R * R);
    Field rhs(K.size());
    for (std::size_t i = 0; i < K.size(); ++i)
        rhs[i] = -hh_rr * K[i];
    Field V;
    solve_tridiag_neumann(-(2.0 + hh_rr), 1.0, V, rhs, ws);
    return V;
}

Field solve_screened(const Field& K, double R, const Grid& grid) {
    TriDiagWorkspace ws;
    return solve_screened(K, R, grid, ws);
}

Field convolve_exponential(const Field& k_half, double R, const Grid& grid) {
    assert((int)k_half.size() == grid.n_nodes());
    const int N = grid.n_cells;
    const double h = grid.h;

    // Even reflection about 0 then 2pi-periodic extension: the sample at
    // any integer node index j is k_half[fold(j)] with fold reflecting
    // j into [0, N] modulo the 2N period.
    auto fold = [N](long long j) {
        long long m = j % (2LL * N);
        if (m < 0) m += 2LL * N;
        if (m > N) m = 2LL * N - m;
        return (int)m;
    };

    // Truncate the convolution at L = periods*2pi with e^{-L/R} < 1e-12.
    const int periods = (int)std::ceil(R * std::log(1e12) / (2.0 * std::numbers::pi)) + 1;
    const long long M = (long long)periods * 2LL * N; // nodes each side

    Field out(k_half.size());
    const double inv2R = 1.0 / (2.0 * R);
    for (int i = 0; i <= N; ++i) {
        // Composite trapezoid of G(x_i - y) k(y) over y in [x_i-L, x_i+L].
        double s = 0.0;
        for (long long j = i - M; j <= i + M; ++j) {
            const double dist = std::abs((double)(i - j)) * h;
            double w = (j == i - M || j == i + M) ? 0.5 : 1.0;
            s += w * std::exp(-dist / R) * k_half[fold(j)];
        }
        out[i] = s * h * inv2R;
    }
    return out;
}

double equivalence_discrepancy(const Field& k_half, double R, const Grid& grid) {
    const Field a = solve_screened(k_half, R, grid);
    const Field b = convolve_exponential(k_half, R, grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace memopat
