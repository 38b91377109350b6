#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "memopat/elliptic.hpp"

using namespace memopat;

namespace {

Field cosine_field(const Grid& grid, int n, double amp, double offset) {
    Field k(grid.n_nodes());
    for (int i = 0; i < grid.n_nodes(); ++i)
        k[i] = offset + amp * std::cos(n * grid.node[i]);
    return k;
}

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("constant input is reproduced exactly") {
    const Grid grid(64);
    for (double c : {0.0, 1.0, -3.7, 10.0 / 13.0}) {
        const Field k(grid.n_nodes(), c);
        const Field v = solve_screened(k, 0.75, grid);
        for (double vi : v)
            CHECK(vi == doctest::Approx(c).epsilon(1e-13));
    }
}

TEST_CASE("cosine modes are damped by the screening factor") {
    // v'' - (v - k)/R^2 = 0 with k = cos(n x) has the exact solution
    // v = cos(n x)/(1 + n^2 R^2); the discrete solve converges at O(h^2).
    const double R = 0.6;
    for (int n : {1, 2, 3, 5}) {
        double prev_err = -1.0;
        for (int cells : {64, 128, 256}) {
            const Grid grid(cells);
            const Field k = cosine_field(grid, n, 1.0, 0.4);
            const Field v = solve_screened(k, R, grid);
            const double damp = 1.0 / (1.0 + n * n * R * R);
            double err = 0;
            for (int i = 0; i < grid.n_nodes(); ++i)
                err = std::max(err, std::abs(v[i] - (0.4 + damp * std::cos(n * grid.node[i]))));
            if (prev_err > 0) {
                // halving h should cut the error by ~4
                CHECK(prev_err / err > 3.4);
                CHECK(prev_err / err < 4.6);
            }
            prev_err = err;
        }
        CHECK(prev_err < 2e-4 * n * n);
    }
}

TEST_CASE("solve preserves the trapezoid mean") {
    // Integrating the equation with no-flux ends gives mean(v) = mean(k);
    // the discrete operator inherits this identity exactly.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const Grid grid(128);
    for (int trial = 0; trial < 20; ++trial) {
        Field k(grid.n_nodes());
        for (double& x : k)
            x = dist(rng);
        const double R = 0.05 + 2.45 * (trial + 1) / 21.0;
        const Field v = solve_screened(k, R, grid);
        CHECK(mean_value(v, grid) ==
              doctest::Approx(mean_value(k, grid)).epsilon(1e-12));
    }
}

TEST_CASE("maximum principle: output range inside input range") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.2, 3.0);
    const Grid grid(96);
    for (int trial = 0; trial < 20; ++trial) {
        Field k(grid.n_nodes());
        for (double& x : k)
            x = dist(rng);
        const auto [klo, khi] = std::minmax_element(k.begin(), k.end());
        const Field v = solve_screened(k, 0.3 + 0.1 * trial, grid);
        for (double vi : v) {
            CHECK(vi >= *klo - 1e-12);
            CHECK(vi <= *khi + 1e-12);
        }
    }
}

TEST_CASE("screened solve matches the reflected kernel convolution") {
    // The Neumann problem on (0,pi) is the even periodic extension of the
    // whole-line screened equation, so the tridiagonal solve and the
    // exponential-kernel convolution must agree up to discretization error.
    for (double R : {0.12, 0.3, 1.0, 2.0}) {
        double prev = -1.0;
        for (int cells : {64, 128, 256}) {
            const Grid grid(cells);
            Field k(grid.n_nodes());
            for (int i = 0; i < grid.n_nodes(); ++i) {
                const double x = grid.node[i];
                k[i] = 1.0 + 0.5 * std::cos(x) + 0.25 * std::cos(3 * x) +
                       0.1 * std::cos(6 * x);
            }
            const double disc = equivalence_discrepancy(k, R, grid);
            // Quadrature error of the kernel convolution scales like (h/R)^2,
            // so the sharpest kernel gets a proportionally looser bar.
            const double bar = 5e-3 * std::max(1.0, 0.1 / (R * R));
            CHECK(disc < bar);
            if (prev > 0)
                CHECK(prev / disc > 3.0); // O(h^2) between grid doublings
            prev = disc;
        }
        CHECK(prev < 4e-4 * std::max(1.0, 0.1 / (R * R)));
    }
}

TEST_CASE("tridiagonal solver handles the generic screened row") {
    // Residual check of the raw Thomas solve on the folded-ghost system.
    const Grid grid(32);
    const int N = grid.n_nodes();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Field rhs(N);
    for (double& x : rhs)
        x = dist(rng);
    const double diag = -2.9, off = 1.0;
    Field x(N);
    TriDiagWorkspace ws;
    solve_tridiag_neumann(diag, off, x, rhs, ws);
    // row 0 and row N-1 fold the ghost: 2*off on the inner neighbor
    CHECK(diag * x[0] + 2 * off * x[1] == doctest::Approx(rhs[0]).epsilon(1e-12));
    CHECK(diag * x[N - 1] + 2 * off * x[N - 2] ==
          doctest::Approx(rhs[N - 1]).epsilon(1e-12));
    for (int i = 1; i < N - 1; ++i)
        CHECK(off * x[i - 1] + diag * x[i] + off * x[i + 1] ==
              doctest::Approx(rhs[i]).epsilon(1e-12));
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(4), ValidationError);
    CHECK_THROWS_AS(Grid(9), ValidationError);
    const Grid g(8);
    CHECK(g.n_nodes() == 9);
    CHECK(g.h == doctest::Approx(std::numbers::pi / 8).epsilon(1e-15));
    CHECK(g.node.front() == doctest::Approx(0.0));
    CHECK(g.node.back() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
}
