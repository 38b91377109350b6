#pragma once

#include <optional>

#include "memopat/bifurcation.hpp"
#include "memopat/solver.hpp"

namespace memopat {

enum class Branch { Perturbation, Continuation };
enum class BranchSelect { Both, PerturbationOnly, ContinuationOnly };

struct BifurcationRecord {
    double alpha = 0;
    Branch branch = Branch::Perturbation;
    double amplitude = 0;
    int peak_count = 0;
    double mean_u = 0;
    Phase phase_sign = Phase::Flat;
    bool converged = false;
    double t_final = 0;
};

struct BifurcationDiagram {
    std::vector<BifurcationRecord> records; // sorted by alpha within branch
    double alpha_center = 0;
    int n_crit = 0;
};

// A sweep covers the window (alpha_center - delta0, alpha_center + delta0)
// with n_points equally spaced samples.  The Perturbation branch runs each
// alpha independently from a random perturbation of the homogeneous state;
// the Continuation branch walks sequentially from the far unstable side of
// the window toward (and past) the threshold, chaining terminal states,
// with a finite-amplitude cos(n_crit x) kick seeding its first point.
struct SweepPlan {
    ModelSpec spec;          // alpha field is overwritten per sample
    SolverConfig solver;
    double alpha_center = 0; // usually the critical threshold
    double delta0 = 0;       // half-width, > 0
    int n_points = 50;
    double kick_amp = 0.5;
    BranchSelect branches = BranchSelect::Both;
    int threads = 1;         // concurrency for the Perturbation branch
};

BifurcationDiagram run_sweep(const SweepPlan& plan);

struct HysteresisWindow {
    double alpha_lo = 0, alpha_hi = 0;
    double width() const { return alpha_hi - alpha_lo; }
};

// The alpha-interval over which the two branches' amplitudes differ by
// more than amp_tol; nullopt when they agree everywhere (supercritical).
std::optional<HysteresisWindow> detect_hysteresis(const BifurcationDiagram& diagram,
                                                  double amp_tol = 0.05);

struct MassPoint {
    double R = 0, alpha = 0, mean_u = 0, amplitude = 0;
    bool converged = false;
};

// Mean density along a continuation-style walk over the given alpha values
// (visited in the order given; pass the stable side first to exhibit a
// subcritical jump).  A fresh small perturbation is injected at every
// point so destabilization is seeded when the threshold is crossed.
std::vector<MassPoint> mass_curve(const ModelSpec& spec_template,
                                  const SolverConfig& solver, double R,
                                  const std::vector<double>& alphas);

struct NormalFormReport {
    double slope_fit = 0;
    double slope_predicted = 0; // 2 / alpha''(0)
    double rel_deviation = 0;
    int n_points_used = 0;
};

// Least-squares (through the origin) fit of s^2 vs (alpha - alpha_n) over
// the nearest 5 converged post-onset records, where s = amplitude/2 is the
// leading cosine coefficient; compares against the normal-form slope
// 2/alpha''(0).  Requires a supercritical (stable local branch) diagram.
NormalFormReport validate_against_normal_form(const BifurcationDiagram& diagram,
                                              const BifurcationCoefficients& coeffs,
                                              const LinearizationData& lin);

} // namespace memopat
