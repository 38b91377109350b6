#include "memopat/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <map>
#include <thread>

#include "memopat/stability.hpp"

namespace memopat {

namespace {

// Independent per-record RNG streams: splitmix64 of (seed, index) so the
// result is identical regardless of how records are scheduled on threads.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> alpha_grid(const SweepPlan& plan) {
    assert(plan.n_points >= 2 && plan.delta0 > 0.0);
    std::vector<double> alphas(plan.n_points);
    const double lo = plan.alpha_center - plan.delta0;
    const double step = 2.0 * plan.delta0 / (plan.n_points - 1);
    for (int j = 0; j < plan.n_points; ++j)
        alphas[j] = lo + j * step;
    return alphas;
}

BifurcationRecord to_record(double alpha, Branch branch, const RunResult& rr) {
    BifurcationRecord rec;
    rec.alpha = alpha;
    rec.branch = branch;
    rec.amplitude = rr.amplitude;
    rec.peak_count = rr.peak_count;
    rec.mean_u = rr.mean_u;
    rec.phase_sign = rr.phase_sign;
    rec.converged = rr.converged;
    rec.t_final = rr.t_final;
    return rec;
}

} // namespace

BifurcationDiagram run_sweep(const SweepPlan& plan) {
    const LinearizationData lin = linearize(plan.spec);
    if (lin.w_u == 0.0)
        throw DegenerateMap("run_sweep: w_u = 0, nothing destabilizes");
    const bool growth_present =
        plan.spec.growth.kind == GrowthModel::Kind::Logistic;
    const auto [alpha_crit, n_crit] =
        critical_threshold(lin, plan.spec.d, plan.spec.R, growth_present);
    (void)alpha_crit;

    const std::vector<double> alphas = alpha_grid(plan);
    const Grid grid(plan.solver.n_cells);

    BifurcationDiagram diagram;
    diagram.alpha_center = plan.alpha_center;
    diagram.n_crit = n_crit;

    // --- Perturbation branch: independent runs, safe to parallelize ---
    if (plan.branches != BranchSelect::ContinuationOnly) {
        std::vector<BifurcationRecord> recs(alphas.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t j = next.fetch_add(1);
                if (j >= alphas.size())
                    return;
                ModelSpec spec = plan.spec;
                spec.alpha = alphas[j];
                SolverConfig cfg = plan.solver;
                cfg.seed = mix_seed(plan.solver.seed, j);
                const FieldState init = make_initial(spec, cfg, grid);
                const RunResult rr = run_to_steady(spec, cfg, init);
                recs[j] = to_record(alphas[j], Branch::Perturbation, rr);
            }
        };
        const int n_threads = std::max(1, plan.threads);
        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < n_threads; ++t)
                pool.emplace_back(worker);
            for (auto& th : pool)
                th.join();
        }
        diagram.records.insert(diagram.records.end(), recs.begin(), recs.end());
    }

    // --- Continuation branch: sequential from the far unstable side ---
    if (plan.branches != BranchSelect::PerturbationOnly) {
        // Destabilization is toward more-negative alpha when w_u > 0 and
        // more-positive when w_u < 0; the far unstable side is the window
        // edge in that direction.
        std::vector<std::size_t> order(alphas.size());
        for (std::size_t j = 0; j < order.size(); ++j)
            order[j] = j;
        if (lin.w_u < 0.0)
            std::reverse(order.begin(), order.end());

        ModelSpec spec = plan.spec;
        spec.alpha = alphas[order[0]];
        SolverConfig cfg = plan.solver;
        cfg.seed = mix_seed(plan.solver.seed, 1ULL << 32);
        FieldState state = make_initial(spec, cfg, grid);
        // Finite-amplitude kick onto the critical cosine mode: beyond a
        // subcritical threshold the homogeneous state may still be locally
        // stable, and a small random perturbation would never leave it.
        for (int i = 0; i < grid.n_nodes(); ++i)
            state.u[i] += plan.kick_amp * std::cos(n_crit * grid.node[i]);

        std::vector<BifurcationRecord> recs;
        recs.reserve(alphas.size());
        for (std::size_t idx : order) {
            spec.alpha = alphas[idx];
            state.t = 0.0;
            const RunResult rr = run_to_steady(spec, cfg, state);
            recs.push_back(to_record(alphas[idx], Branch::Continuation, rr));
            state = rr.final; // chain the terminal state, converged or not
        }
        std::sort(recs.begin(), recs.end(),
                  [](const BifurcationRecord& a, const BifurcationRecord& b) {
                      return a.alpha < b.alpha;
                  });
        diagram.records.insert(diagram.records.end(), recs.begin(), recs.end());
    }
    return diagram;
}

std::optional<HysteresisWindow> detect_hysteresis(const BifurcationDiagram& diagram,
                                                  double amp_tol) {
    std::map<double, double> pert, cont;
    for (const auto& r : diagram.records) {
        (r.branch == Branch::Perturbation ? pert : cont)[r.alpha] = r.amplitude;
    }
    if (pert.empty() || cont.empty())
        throw InsufficientData("detect_hysteresis: need both branches");

    bool any = false;
    double lo = 0, hi = 0;
    for (const auto& [alpha, amp_p] : pert) {
        const auto it = cont.find(alpha);
        if (it == cont.end())
            continue;
        if (std::abs(amp_p - it->second) > amp_tol) {
            if (!any) {
                lo = hi = alpha;
                any = true;
            } else {
                lo = std::min(lo, alpha);
                hi = std::max(hi, alpha);
            }
        }
    }
    if (!any)
        return std::nullopt;
    return HysteresisWindow{lo, hi};
}

std::vector<MassPoint> mass_curve(const ModelSpec& spec_template,
                                  const SolverConfig& solver, double R,
                                  const std::vector<double>& alphas) {
    ModelSpec spec = spec_template;
    spec.R = R;
    const Grid grid(solver.n_cells);

    std::vector<MassPoint> out;
    out.reserve(alphas.size());
    std::optional<FieldState> carried;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        spec.alpha = alphas[j];
        SolverConfig cfg = solver;
        cfg.seed = mix_seed(solver.seed, j);
        FieldState init = make_initial(spec, cfg, grid);
        if (carried) {
            // Continuation-style: previous terminal state plus the fresh
            // zero-mean noise from make_initial (u* cancels out of the sum).
            const double us = constant_state_density(spec);
            for (int i = 0; i < grid.n_nodes(); ++i)
                init.u[i] += carried->u[i] - us;
            init.k = carried->k;
            init.v = carried->v;
        }
        const RunResult rr = run_to_steady(spec, cfg, init);
        out.push_back({R, alphas[j], rr.mean_u, rr.amplitude, rr.converged});
        carried = rr.final;
    }
    return out;
}

NormalFormReport validate_against_normal_form(const BifurcationDiagram& diagram,
                                              const BifurcationCoefficients& coeffs,
                                              const LinearizationData& lin) {
    if (coeffs.branch_stability != BranchStability::Stable)
        throw WrongSide("validate_against_normal_form: the local branch is "
                        "unstable (subcritical onset); amplitudes near the "
                        "threshold do not follow the stable branch");

    // Post-onset means past the threshold in the destabilizing direction.
    const double side = lin.w_u > 0.0 ? -1.0 : 1.0;

    // Prefer the Continuation record when both branches sampled an alpha:
    // it reaches the branch without the slow linear-growth transient.
    std::map<double, const BifurcationRecord*> chosen;
    for (const auto& r : diagram.records) {
        if (!r.converged)
            continue;
        const double x = (r.alpha - coeffs.alpha_n) * side;
        if (x <= 0.0)
            continue;
        auto [it, inserted] = chosen.try_emplace(r.alpha, &r);
        if (!inserted && r.branch == Branch::Continuation)
            it->second = &r;
    }

    std::vector<const BifurcationRecord*> recs;
    for (const auto& [alpha, rec] : chosen)
        recs.push_back(rec);
    std::sort(recs.begin(), recs.end(),
              [&](const BifurcationRecord* a, const BifurcationRecord* b) {
                  return std::abs(a->alpha - coeffs.alpha_n) <
                         std::abs(b->alpha - coeffs.alpha_n);
              });
    if (recs.size() < 5)
        throw InsufficientData("validate_against_normal_form: fewer than 5 "
                               "converged post-onset points");
    recs.resize(5);

    // s = amplitude/2 is the leading-order cosine coefficient; fit s^2 =
    // m * (alpha - alpha_n) through the origin.
    double sxy = 0, sxx = 0;
    for (const auto* r : recs) {
        const double x = r->alpha - coeffs.alpha_n;
        const double s = 0.5 * r->amplitude;
        sxy += x * s * s;
        sxx += x * x;
    }
    NormalFormReport rep;
    rep.slope_fit = sxy / sxx;
    rep.slope_predicted = 2.0 / coeffs.alpha_dd0;
    rep.rel_deviation = std::abs(rep.slope_fit - rep.slope_predicted) /
                        std::abs(rep.slope_predicted);
    rep.n_points_used = (int)recs.size();
    return rep;
}

} // namespace memopat
