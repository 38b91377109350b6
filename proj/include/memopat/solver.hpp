#pragma once

#include <cstdint>
#include <utility>

#include "memopat/elliptic.hpp"
#include "memopat/grid.hpp"
#include "memopat/model.hpp"

namespace memopat {

struct FieldState {
    double t = 0.0;
    Field u, k, v;
};

struct SolverConfig {
    int n_cells = 256;
    double dt = 1e-3;
    double t_max = 2000.0;
    double steady_tol = 1e-8;   // on max |u^{m+1}-u^m| / dt
    std::uint64_t seed = 0;
    double perturb_amp = 0.01;
    int mass_stride = 1000;     // steps between mass-history samples
    int max_dt_halvings = 6;    // BlowUp recovery attempts
};

enum class Phase { InPhase, OutOfPhase, Flat };

struct RunResult {
    FieldState final;
    bool converged = false;
    double t_final = 0.0;
    double amplitude = 0.0; // max(u) - min(u)
    int peak_count = 0;
    double mean_u = 0.0;
    Phase phase_sign = Phase::Flat;
    std::vector<std::pair<double, double>> mass_history; // (t, integral of u)
    double dt_used = 0.0;   // after any halvings
    long long steps = 0;
    // Trajectory monitors for the positivity and k-comparison bounds.
    double u_min_seen = 0.0;
    double k_min_seen = 0.0;
    double k_max_seen = 0.0;
};

// u0 = u* + eta with eta_i ~ Uniform(-perturb_amp, perturb_amp), shifted so
// the trapezoid mean of eta is exactly zero (the domain mean of u0 is u*);
// k0 = v0 = k*.  Deterministic in config.seed.
FieldState make_initial(const ModelSpec& spec, const SolverConfig& config,
                        const Grid& grid);

// One IMEX step: v from the screened solve; conservative explicit advective
// flux and explicit f(u); backward-Euler diffusion (tridiagonal solve);
// exact exponential update of k with u frozen at the new value.  Throws
// BlowUp on non-finite values or max|u| > 1e6.
FieldState step(const ModelSpec& spec, const FieldState& state, double dt,
                const Grid& grid);

// Reusable stepping context: preallocated buffers, no per-step allocation.
class Stepper {
  public:
    Stepper(const ModelSpec& spec, const Grid& grid);
    void advance(FieldState& state, double dt); // in-place step
    const Grid& grid() const { return grid_; }

  private:
    const ModelSpec spec_;
    const Grid grid_;
    TriDiagWorkspace ws_;
    Field phi_, rhs_;
};

// Iterates step() until max_i |u^{m+1}_i - u^m_i| / dt <= steady_tol or
// t exceeds t_max; on BlowUp restarts from the initial state with dt halved
// (up to max_dt_halvings times) before giving up and rethrowing.
RunResult run_to_steady(const ModelSpec& spec, const SolverConfig& config,
                        const FieldState& initial);

// |integral of f(u) dx| on the final state; vanishes at steady state for
// logistic growth (integrate the u-equation: flux terms drop out).
double steady_state_identity_check(const ModelSpec& spec, const RunResult& result);

// Strict local maxima of u reflected evenly onto [-pi, pi) with periodic
// wraparound; plateau-aware; only peaks with prominence above
// prominence_floor are counted.
int count_peaks(const Field& u, double prominence_floor);

// Observable extraction shared by run_to_steady and the sweep driver.
double field_amplitude(const Field& u);
Phase phase_of(const Field& u, const Field& k, const Grid& grid);

} // namespace memopat
