#pragma once

#include <string>
#include <vector>

#include "memopat/model.hpp"
#include "memopat/solver.hpp"

namespace memopat {

inline constexpr const char* kToolVersion = "memopat 1.0.0";

// Fully resolved run configuration: defaults applied, everything validated
// against the selected command.  `resolved` holds the final key/value pairs
// (in a stable order) for the CSV metadata block.
struct RunConfig {
    std::string command;
    ModelSpec spec;
    SolverConfig solver;

    // sweep / mass-curve / dispersion knobs
    double delta0 = 0.0; // 0 = auto: 15% of |alpha_center|
    int n_points = 50;
    double kick_amp = 0.5;
    std::string branch = "both"; // both | perturbation | continuation
    double amp_tol = 0.05;
    int threads = 1;

    // stability-region sampling
    double r_min = 0.05, r_max = 2.5;
    int n_samples = 50;
    int n_max = 64;

    // mass-curve radii
    std::vector<double> r_values{0.3, 2.0};

    // simulate extras
    int snapshot_stride = 0; // 0 = no trajectory dump

    std::string output_dir = "out";
    bool emit_svg = false;

    std::vector<std::pair<std::string, std::string>> resolved;
};

// Commands the dispatcher understands.
bool is_known_command(const std::string& command);

// Parses flat `key = value` text (# comments, blank lines allowed), applies
// defaults, validates against the command.  Overrides (from CLI flags) are
// applied after the file content, before validation.  Throws ParseError /
// ValidationError / UnknownKey with messages naming the key and line.
RunConfig parse_config(const std::string& text, const std::string& command,
                       const std::vector<std::pair<std::string, std::string>>&
                           overrides = {});

} // namespace memopat
