#pragma once

#include "memopat/grid.hpp"

namespace memopat {

// Reusable tridiagonal scratch space so the time stepper does not allocate
// per step.  Never share one workspace across threads.
struct TriDiagWorkspace {
    std::vector<double> c_prime, d_prime;
    void resize(std::size_t n) {
        c_prime.resize(n);
        d_prime.resize(n);
    }
};

// Solves the constant-coefficient tridiagonal system
//   lower*x[i-1] + diag*x[i] + upper*x[i+1] = rhs[i]
// with modified first/last rows (Neumann ghost closure folds the ghost
// node into a doubled off-diagonal).  Thomas elimination; the systems
// used here are strictly diagonally dominant, so no pivoting is needed.
void solve_tridiag_neumann(double diag, double off, Field& x, const Field& rhs,
                           TriDiagWorkspace& ws);

// V solving 0 = V_xx - (V - K)/R^2 with Neumann ends, by second-order
// central differences with ghost nodes (V_{-1}=V_1, V_{N+1}=V_{N-1}).
Field solve_screened(const Field& K, double R, const Grid& grid);
Field solve_screened(const Field& K, double R, const Grid& grid,
                     TriDiagWorkspace& ws);

// Independent oracle for solve_screened: reflect the field evenly about
// x=0, extend 2pi-periodically, and convolve with the exponential kernel
// G(x) = e^{-|x|/R}/(2R) by composite trapezoid over enough periods that
// the neglected kernel tail is below 1e-12.
Field convolve_exponential(const Field& k_half, double R, const Grid& grid);

// Max |solve_screened - convolve_exponential| over the grid for the given
// input; the two agree at O(h^2) on smooth even fields.
double equivalence_discrepancy(const Field& k_half, double R, const Grid& grid);

} // namespace memopat
