#include "memopat/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>

namespace memopat {

namespace {

// Portable uniform double in [0,1): take the top 53 bits of the generator
// output.  std::uniform_real_distribution is not bit-stable across
// standard libraries; this mapping is.
double unit_uniform(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

void check_finite(const Field& u) {
    for (double x : u) {
        if (!std::isfinite(x) || std::abs(x) > 1e6)
            throw BlowUp("time step produced non-finite or unbounded u "
                         "(|u| > 1e6); reduce dt");
    }
}

} // namespace

FieldState make_initial(const ModelSpec& spec, const SolverConfig& config,
                        const Grid& grid) {
    const double us = constant_state_density(spec);
    const LinearizationData lin = linearize(spec);

    FieldState st;
    st.t = 0.0;
    st.u.resize(grid.n_nodes());
    std::mt19937_64 rng(config.seed);
    for (double& ui : st.u)
        ui = config.perturb_amp * (2.0 * unit_uniform(rng) - 1.0);
    // Shift the perturbation to zero domain mean so mass starts exactly at
    // pi*u* (the no-growth constant state is defined by that mean).
    const double bias = mean_value(st.u, grid);
    for (double& ui : st.u)
        ui += us - bias;

    st.k.assign(grid.n_nodes(), lin.k_star);
    st.v.assign(grid.n_nodes(), lin.k_star); // screened solve of a constant
    return st;
}

Stepper::Stepper(const ModelSpec& spec, const Grid& grid)
    : spec_(spec), grid_(grid) {
    phi_.resize(grid.n_cells);
    rhs_.resize(grid.n_nodes());
}

void Stepper::advance(FieldState& state, double dt) {
    const int N = grid_.n_cells;
    const double h = grid_.h;
    const double alpha = spec_.alpha;

    // (a) screened elliptic solve for v from the current k.
    state.v = solve_screened(state.k, spec_.R, grid_, ws_);

    // (b) advective flux at faces: F_{i+1/2} = alpha * u_face * (v_{i+1}-v_i)/h
    // with arithmetic face averages; boundary faces carry zero flux.
    const Field& u = state.u;
    const Field& v = state.v;
    for (int i = 0; i < N; ++i)
        phi_[i] = alpha * 0.5 * (u[i] + u[i + 1]) * (v[i + 1] - v[i]) / h;

    // (c) explicit flux divergence and reaction, implicit diffusion.
    // Interior control volumes have width h, the two boundary ones h/2,
    // which makes the trapezoid-weighted divergence telescope to zero:
    // mass is conserved to rounding when f == 0.
    rhs_[0] = u[0] + dt * (2.0 * phi_[0] / h + eval_f(spec_, u[0], 0));
    for (int i = 1; i < N; ++i)
        rhs_[i] = u[i] + dt * ((phi_[i] - phi_[i - 1]) / h + eval_f(spec_, u[i], 0));
    rhs_[N] = u[N] + dt * (-2.0 * phi_[N - 1] / h + eval_f(spec_, u[N], 0));

    // Backward Euler for diffusion: (I - dt*d*L) u_new = rhs with the
    // ghost-node Neumann Laplacian L.
    const double r = dt * spec_.d / (h * h);
    solve_tridiag_neumann(1.0 + 2.0 * r, -r, state.u, rhs_, ws_);

    check_finite(state.u);

    // (d) exact exponential update of k with u frozen at the new value:
    // k' = g1(u) - g2(u) k has solution k*e^{-g2 dt} + (g1/g2)(1-e^{-g2 dt}).
    for (int i = 0; i <= N; ++i) {
        const double g1 = eval_g(spec_, Which::g1, state.u[i], 0);
        const double g2 = eval_g(spec_, Which::g2, state.u[i], 0);
        const double em = -std::expm1(-g2 * dt); // 1 - e^{-g2 dt}, accurately
        state.k[i] += em * (g1 / g2 - state.k[i]);
    }

    state.t += dt;
}

FieldState step(const ModelSpec& spec, const FieldState& state, double dt,
                const Grid& grid) {
    Stepper stepper(spec, grid);
    FieldState next = state;
    stepper.advance(next, dt);
    return next;
}

double field_amplitude(const Field& u) {
    auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
}

Phase phase_of(const Field& u, const Field& k, const Grid& grid) {
    if (field_amplitude(u) < 1e-6)
        return Phase::Flat;
    const double ubar = mean_value(u, grid);
    const double kbar = mean_value(k, grid);
    Field prod(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        prod[i] = (u[i] - ubar) * (k[i] - kbar);
    const double corr = trapezoid(prod, grid);
    if (corr > 0.0) return Phase::InPhase;
    if (corr < 0.0) return Phase::OutOfPhase;
    return Phase::Flat;
}

int count_peaks(const Field& u, double prominence_floor) {
    const int N = (int)u.size() - 1;
    const int M = 2 * N; // reflected periodic array length
    // Sample index m in [0, M) maps to x = -pi + m*h, i.e. u[|m - N|].
    auto val = [&](int m) { return u[std::abs(((m % M + M) % M) - N)]; };

    // Start at a run boundary so no run of equal values straddles the
    // wrap seam; a fully constant field has no boundary and no peaks.
    int m0 = -1;
    for (int i = 0; i < M; ++i) {
        if (val(i) != val(i - 1)) {
            m0 = i;
            break;
        }
    }
    if (m0 < 0)
        return 0;

    // Walk runs of equal consecutive values around the circle and label
    // each run as peak (both neighbors lower) or valley (both higher).
    struct Extremum {
        double value;
        bool is_peak;
    };
    std::vector<Extremum> extrema;
    int m = m0;
    while (m < m0 + M) {
        int run_end = m;
        while (run_end + 1 < m0 + M && val(run_end + 1) == val(m))
            ++run_end;
        const double left = val(m - 1);
        const double right = val(run_end + 1);
        if (left < val(m) && right < val(m))
            extrema.push_back({val(m), true});
        else if (left > val(m) && right > val(m))
            extrema.push_back({val(m), false});
        m = run_end + 1;
    }
    if (extrema.empty())
        return 0;

    // Peaks and valleys alternate around the circle; prominence of a peak
    // is its height above the higher of its two neighboring valleys.
    int count = 0;
    const int E = (int)extrema.size();
    for (int i = 0; i < E; ++i) {
        if (!extrema[i].is_peak)
            continue;
        const Extremum& prev = extrema[(i + E - 1) % E];
        const Extremum& next = extrema[(i + 1) % E];
        const double base = std::max(prev.value, next.value);
        if (extrema[i].value - base >= prominence_floor)
            ++count;
    }
    return count;
}

RunResult run_to_steady(const ModelSpec& spec, const SolverConfig& config,
                        const FieldState& initial) {
    const Grid grid(config.n_cells);
    assert((int)initial.u.size() == grid.n_nodes());

    double dt = config.dt;
    for (int attempt = 0;; ++attempt) {
        try {
            Stepper stepper(spec, grid);
            RunResult res;
            res.dt_used = dt;
            FieldState st = initial;
            st.t = 0.0;

            res.u_min_seen = *std::min_element(st.u.begin(), st.u.end());
            res.k_min_seen = *std::min_element(st.k.begin(), st.k.end());
            res.k_max_seen = *std::max_element(st.k.begin(), st.k.end());
            res.mass_history.emplace_back(0.0, trapezoid(st.u, grid));

            const long long total_steps = (long long)std::ceil(config.t_max / dt);
            Field u_prev;
            for (long long m = 1; m <= total_steps; ++m) {
                u_prev = st.u;
                stepper.advance(st, dt);
                ++res.steps;

                double du_max = 0.0;
                double u_min = st.u[0];
                for (std::size_t i = 0; i < st.u.size(); ++i) {
                    du_max = std::max(du_max, std::abs(st.u[i] - u_prev[i]));
                    u_min = std::min(u_min, st.u[i]);
                }
                res.u_min_seen = std::min(res.u_min_seen, u_min);
                for (double kv : st.k) {
                    res.k_min_seen = std::min(res.k_min_seen, kv);
                    res.k_max_seen = std::max(res.k_max_seen, kv);
                }
                if (m % config.mass_stride == 0)
                    res.mass_history.emplace_back(st.t, trapezoid(st.u, grid));

                if (du_max / dt <= config.steady_tol) {
                    res.converged = true;
                    break;
                }
            }

            res.mass_history.emplace_back(st.t, trapezoid(st.u, grid));
            res.t_final = st.t;
            res.amplitude = field_amplitude(st.u);
            res.mean_u = mean_value(st.u, grid);
            res.phase_sign = phase_of(st.u, st.k, grid);
            res.peak_count = res.phase_sign == Phase::Flat
                                 ? 0
                                 : count_peaks(st.u, 1e-4 * res.amplitude);
            res.final = std::move(st);
            return res;
        } catch (const BlowUp&) {
            if (attempt >= config.max_dt_halvings)
                throw;
            dt *= 0.5;
        }
    }
}

double steady_state_identity_check(const ModelSpec& spec, const RunResult& result) {
    const Grid grid((int)result.final.u.size() - 1);
    Field fu(result.final.u.size());
    for (std::size_t i = 0; i < fu.size(); ++i)
        fu[i] = eval_f(spec, result.final.u[i], 0);
    return std::abs(trapezoid(fu, grid));
}

} // namespace memopat
