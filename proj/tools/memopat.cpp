// Command-line front end: parses a flat key=value config (plus --key value
// overrides), dispatches one analysis command, and writes deterministic
// CSV/SVG artifacts into the output directory.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "memopat/config.hpp"
#include "memopat/output.hpp"
#include "memopat/stability.hpp"
#include "memopat/sweep.hpp"

namespace fs = std::filesystem;
using namespace memopat;

namespace {

int usage(std::ostream& out, int code) {
    out << "usage: memopat <command> [--config FILE] [--key value ...]\n"
           "\n"
           "commands:\n"
           "  stability-region    critical threshold |alpha*(R)| and mode over an R range\n"
           "  dispersion          per-mode eigenvalues at the configured alpha, R\n"
           "  bifcoef             pitchfork coefficients at the critical mode\n"
           "  simulate            single run to steady state\n"
           "  sweep               two-branch bifurcation diagram around the threshold\n"
           "  mass-curve          mean density vs alpha for each configured radius\n"
           "  verify-equivalence  screened solve vs kernel convolution discrepancy\n"
           "\n"
           "Flags mirror config keys (e.g. --R 0.3 --alpha -3.1 --n_cells 128);\n"
           "see README.md for the full key list.  MEMOPAT_OUTPUT overrides the\n"
           "output directory.\n";
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool growth_present(const ModelSpec& spec) {
    return spec.growth.kind == GrowthModel::Kind::Logistic;
}

// delta0 key, or the documented default of 15% of |alpha_center|.
double effective_delta0(const RunConfig& cfg, double alpha_center) {
    return cfg.delta0 > 0.0 ? cfg.delta0 : 0.15 * std::abs(alpha_center);
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

// ---------------------------------------------------------------- commands

int cmd_stability_region(const RunConfig& cfg, const CsvMeta& meta) {
    const LinearizationData lin = linearize(cfg.spec);
    const auto curve = stability_region(lin, cfg.spec.d, growth_present(cfg.spec),
                                        cfg.r_min, cfg.r_max, cfg.n_samples,
                                        cfg.n_max);
    write_region_csv(out_path(cfg, "region.csv"), meta, curve);
    if (cfg.emit_svg) {
        PlotSeries s{"|alpha*(R)|", {}, "#1f77b4", true, true};
        for (const auto& p : curve)
            s.points.emplace_back(p.R, std::abs(p.alpha_crit));
        write_svg_plot(out_path(cfg, "region.svg"), "stability boundary", "R",
                       "|alpha*|", {s});
    }
    std::cout << "stability-region: " << curve.size() << " samples, R in ["
              << format_double(cfg.r_min) << ", " << format_double(cfg.r_max)
              << "] -> " << out_path(cfg, "region.csv") << "\n";
    return 0;
}

int cmd_dispersion(const RunConfig& cfg, const CsvMeta& meta) {
    const LinearizationData lin = linearize(cfg.spec);
    write_dispersion_csv(out_path(cfg, "dispersion.csv"), meta, lin, cfg.spec.d,
                         cfg.spec.R, cfg.spec.alpha, cfg.n_max);
    if (cfg.emit_svg) {
        PlotSeries s{"Re lambda_+", {}, "#d62728", true, true};
        for (int n = 0; n <= cfg.n_max; ++n) {
            const auto ev = eigenvalues(lin, cfg.spec.d, cfg.spec.R,
                                        cfg.spec.alpha, n);
            s.points.emplace_back(n, ev.lambda_plus.real());
        }
        write_svg_plot(out_path(cfg, "dispersion.svg"), "dispersion relation",
                       "n", "Re lambda_+", {s});
    }
    std::cout << "dispersion: n = 0.." << cfg.n_max << " at alpha = "
              << format_double(cfg.spec.alpha) << " -> "
              << out_path(cfg, "dispersion.csv") << "\n";
    return 0;
}

int cmd_bifcoef(const RunConfig& cfg, const CsvMeta& meta) {
    const LinearizationData lin = linearize(cfg.spec);
    const auto [alpha_crit, n_crit] =
        critical_threshold(lin, cfg.spec.d, cfg.spec.R, growth_present(cfg.spec),
                           cfg.n_max);
    const BifurcationCoefficients bc =
        bifurcation_coefficients(lin, cfg.spec.d, cfg.spec.R, n_crit);
    write_bifcoef_csv(out_path(cfg, "bifcoef.csv"), meta, {bc});
    std::cout << "bifcoef: R = " << format_double(cfg.spec.R)
              << ", n_crit = " << n_crit
              << ", alpha_n = " << format_double(bc.alpha_n)
              << ", alpha_dd0 = " << format_double(bc.alpha_dd0) << ", "
              << (bc.direction == Direction::Forward ? "forward" : "backward")
              << "/"
              << (bc.branch_stability == BranchStability::Stable ? "stable"
                                                                 : "unstable")
              << " -> " << out_path(cfg, "bifcoef.csv") << "\n";
    (void)alpha_crit;
    return 0;
}

int cmd_simulate(const RunConfig& cfg, const CsvMeta& meta) {
    const Grid grid(cfg.solver.n_cells);
    const FieldState init = make_initial(cfg.spec, cfg.solver, grid);

    RunResult res;
    if (cfg.snapshot_stride > 0) {
        // Manual loop so intermediate states can be dumped; same stepping
        // and stopping rules as run_to_steady (without dt-halving retries,
        // which would invalidate the written snapshots).
        std::ofstream traj(out_path(cfg, "trajectory.csv"), std::ios::binary);
        traj << "# " << kToolVersion << "\nt,x,u,k,v\n";
        auto dump = [&](const FieldState& st) {
            for (int i = 0; i < grid.n_nodes(); ++i)
                traj << format_double(st.t) << ',' << format_double(grid.node[i])
                     << ',' << format_double(st.u[i]) << ','
                     << format_double(st.k[i]) << ',' << format_double(st.v[i])
                     << "\n";
        };
        Stepper stepper(cfg.spec, grid);
        FieldState st = init;
        dump(st);
        const long long total =
            (long long)std::ceil(cfg.solver.t_max / cfg.solver.dt);
        Field u_prev;
        for (long long m = 1; m <= total; ++m) {
            u_prev = st.u;
            stepper.advance(st, cfg.solver.dt);
            double du = 0;
            for (std::size_t i = 0; i < st.u.size(); ++i)
                du = std::max(du, std::abs(st.u[i] - u_prev[i]));
            if (m % cfg.snapshot_stride == 0)
                dump(st);
            if (du / cfg.solver.dt <= cfg.solver.steady_tol) {
                res.converged = true;
                break;
            }
        }
        dump(st);
        res.final = st;
        res.t_final = st.t;
        res.amplitude = field_amplitude(st.u);
        res.mean_u = mean_value(st.u, grid);
        res.phase_sign = phase_of(st.u, st.k, grid);
        res.peak_count = res.phase_sign == Phase::Flat
                             ? 0
                             : count_peaks(st.u, 1e-4 * res.amplitude);
    } else {
        res = run_to_steady(cfg.spec, cfg.solver, init);
    }

    write_state_csv(out_path(cfg, "final_state.csv"), meta, res.final, grid);
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [t, mass] : res.mass_history)
            rows.push_back({format_double(t), format_double(mass)});
        write_csv(out_path(cfg, "mass_history.csv"), meta, {"t", "mass"}, rows);
    }
    if (cfg.emit_svg) {
        PlotSeries su{"u", {}, "#1f77b4", true, false};
        PlotSeries sk{"k", {}, "#ff7f0e", true, false};
        const int N = grid.n_cells;
        for (int j = 0; j <= 2 * N; ++j) {
            const int i = std::abs(j - N);
            const double x = -std::numbers::pi + j * grid.h;
            su.points.emplace_back(x, res.final.u[i]);
            sk.points.emplace_back(x, res.final.k[i]);
        }
        write_svg_plot(out_path(cfg, "final_state.svg"), "steady state", "x",
                       "density", {su, sk});
    }
    std::cout << "simulate: " << (res.converged ? "converged" : "NOT converged")
              << " at t = " << format_double(res.t_final)
              << ", amplitude = " << format_double(res.amplitude)
              << ", peaks = " << res.peak_count
              << ", mean_u = " << format_double(res.mean_u) << ", phase = "
              << (res.phase_sign == Phase::InPhase
                      ? "in_phase"
                      : res.phase_sign == Phase::OutOfPhase ? "out_of_phase"
                                                            : "flat")
              << " -> " << out_path(cfg, "final_state.csv") << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const CsvMeta& meta) {
    const LinearizationData lin = linearize(cfg.spec);
    const auto [alpha_crit, n_crit] = critical_threshold(
        lin, cfg.spec.d, cfg.spec.R, growth_present(cfg.spec), cfg.n_max);

    SweepPlan plan;
    plan.spec = cfg.spec;
    plan.solver = cfg.solver;
    plan.alpha_center = alpha_crit;
    plan.delta0 = effective_delta0(cfg, alpha_crit);
    plan.n_points = cfg.n_points;
    plan.kick_amp = cfg.kick_amp;
    plan.threads = cfg.threads;
    plan.branches = cfg.branch == "perturbation" ? BranchSelect::PerturbationOnly
                    : cfg.branch == "continuation" ? BranchSelect::ContinuationOnly
                                                   : BranchSelect::Both;
    const BifurcationDiagram diagram = run_sweep(plan);
    write_sweep_csv(out_path(cfg, "sweep.csv"), meta, diagram);

    std::cout << "sweep: alpha_center = " << format_double(alpha_crit)
              << ", n_crit = " << n_crit << ", window +-"
              << format_double(plan.delta0) << ", " << diagram.records.size()
              << " records -> " << out_path(cfg, "sweep.csv") << "\n";

    if (plan.branches == BranchSelect::Both) {
        const auto window = detect_hysteresis(diagram, cfg.amp_tol);
        if (window)
            std::cout << "sweep: hysteresis window [" << format_double(window->alpha_lo)
                      << ", " << format_double(window->alpha_hi) << "], width "
                      << format_double(window->width()) << "\n";
        else
            std::cout << "sweep: no hysteresis (branches agree within "
                      << format_double(cfg.amp_tol) << ")\n";
    }
    if (growth_present(cfg.spec)) {
        try {
            const BifurcationCoefficients bc =
                bifurcation_coefficients(lin, cfg.spec.d, cfg.spec.R, n_crit);
            const NormalFormReport rep =
                validate_against_normal_form(diagram, bc, lin);
            std::cout << "sweep: normal-form slope " << format_double(rep.slope_fit)
                      << " vs predicted " << format_double(rep.slope_predicted)
                      << " (rel dev " << format_double(rep.rel_deviation)
                      << ", " << rep.n_points_used << " points)\n";
        } catch (const Error& e) {
            std::cout << "sweep: normal-form comparison skipped: " << e.what()
                      << "\n";
        }
    }
    if (cfg.emit_svg) {
        PlotSeries sp{"from perturbation", {}, "#1f77b4", false, true};
        PlotSeries sc{"continuation", {}, "#d62728", false, true};
        for (const auto& r : diagram.records)
            (r.branch == Branch::Perturbation ? sp : sc)
                .points.emplace_back(r.alpha, r.amplitude);
        write_svg_plot(out_path(cfg, "sweep.svg"), "bifurcation diagram",
                       "alpha", "amplitude", {sp, sc});
    }
    return 0;
}

int cmd_mass_curve(const RunConfig& cfg, const CsvMeta& meta) {
    const LinearizationData lin = linearize(cfg.spec);
    std::vector<MassPoint> all;
    std::vector<PlotSeries> series;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    int ci = 0;
    for (double R : cfg.r_values) {
        const auto [alpha_crit, n_crit] =
            critical_threshold(lin, cfg.spec.d, R, growth_present(cfg.spec),
                               cfg.n_max);
        (void)n_crit;
        const double delta0 = effective_delta0(cfg, alpha_crit);
        // Walk from the stable edge of the window to the unstable edge so a
        // subcritical series exhibits its jump at the point of no return.
        const double stable_sign = lin.w_u > 0.0 ? 1.0 : -1.0;
        std::vector<double> alphas(cfg.n_points);
        for (int j = 0; j < cfg.n_points; ++j)
            alphas[j] = alpha_crit + stable_sign * delta0 -
                        stable_sign * 2.0 * delta0 * j / (cfg.n_points - 1);
        auto pts = mass_curve(cfg.spec, cfg.solver, R, alphas);
        PlotSeries s{"R = " + format_double(R), {}, colors[ci++ % 4], true, true};
        for (const auto& p : pts)
            s.points.emplace_back(p.alpha, p.mean_u);
        series.push_back(std::move(s));
        all.insert(all.end(), pts.begin(), pts.end());
        std::cout << "mass-curve: R = " << format_double(R) << ", alpha in ["
                  << format_double(alphas.back()) << ", "
                  << format_double(alphas.front()) << "], " << pts.size()
                  << " points\n";
    }
    write_mass_csv(out_path(cfg, "mass.csv"), meta, all);
    if (cfg.emit_svg)
        write_svg_plot(out_path(cfg, "mass.svg"), "mean density vs alpha",
                       "alpha", "mean u", series);
    std::cout << "mass-curve: -> " << out_path(cfg, "mass.csv") << "\n";
    return 0;
}

int cmd_verify_equivalence(const RunConfig& cfg) {
    const Grid grid(cfg.solver.n_cells);
    // Randomized smooth even field: a short cosine series with seeded
    // coefficients; even-ness makes the periodic reflection smooth.
    std::vector<double> coef(7);
    std::uint64_t s = cfg.solver.seed * 0x9e3779b97f4a7c15ULL + 0x2545F4914F6CDD1DULL;
    for (double& c : coef) {
        s ^= s >> 12; s ^= s << 25; s ^= s >> 27; // xorshift64
        c = ((s * 0x2545F4914F6CDD1DULL >> 11) * 0x1.0p-53 - 0.5);
    }
    Field k(grid.n_nodes());
    for (int i = 0; i < grid.n_nodes(); ++i) {
        double v = 1.0;
        for (int n = 0; n < (int)coef.size(); ++n)
            v += coef[n] * std::cos(n * grid.node[i]);
        k[i] = v;
    }
    const double disc = equivalence_discrepancy(k, cfg.spec.R, grid);
    std::cout << "verify-equivalence: n_cells = " << cfg.solver.n_cells
              << ", R = " << format_double(cfg.spec.R)
              << ", max |screened - convolution| = " << format_double(disc)
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2)
        return usage(std::cerr, 2);
    const std::string command = argv[1];
    if (command == "--help" || command == "-h" || command == "help")
        return usage(std::cout, 0);

    try {
        if (!is_known_command(command))
            throw ValidationError("unknown command '" + command + "'");

        std::string config_text;
        std::vector<std::pair<std::string, std::string>> overrides;
        for (int i = 2; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg.rfind("--", 0) != 0)
                throw ValidationError("unexpected argument '" + arg +
                                      "' (flags look like --key value)");
            const std::string key = arg.substr(2);
            if (i + 1 >= argc)
                throw ValidationError("flag --" + key + " needs a value");
            const std::string value = argv[++i];
            if (key == "config")
                config_text = slurp(value);
            else
                overrides.emplace_back(key, value);
        }

        RunConfig cfg = parse_config(config_text, command, overrides);
        if (const char* env = std::getenv("MEMOPAT_OUTPUT"); env && *env)
            cfg.output_dir = env;
        fs::create_directories(cfg.output_dir);

        CsvMeta meta;
        meta.command = command;
        meta.entries = cfg.resolved;

        if (command == "stability-region") return cmd_stability_region(cfg, meta);
        if (command == "dispersion") return cmd_dispersion(cfg, meta);
        if (command == "bifcoef") return cmd_bifcoef(cfg, meta);
        if (command == "simulate") return cmd_simulate(cfg, meta);
        if (command == "sweep") return cmd_sweep(cfg, meta);
        if (command == "mass-curve") return cmd_mass_curve(cfg, meta);
        if (command == "verify-equivalence") return cmd_verify_equivalence(cfg);
        throw ValidationError("unhandled command '" + command + "'");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
