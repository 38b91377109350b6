#pragma once

#include <string>
#include <vector>

#include "memopat/bifurcation.hpp"
#include "memopat/config.hpp"
#include "memopat/stability.hpp"
#include "memopat/sweep.hpp"

namespace memopat {

// Deterministic shortest-roundtrip-ish formatting shared by all writers:
// %.12g keeps CSV output byte-stable across runs and platforms we target.
std::string format_double(double v);

// Every CSV starts with a comment block: tool version, command, and the
// fully resolved configuration, one "# key = value" line per key.  No
// timestamps -- identical inputs must produce identical bytes.
struct CsvMeta {
    std::string command;
    std::vector<std::pair<std::string, std::string>> entries;
};

void write_csv(const std::string& path, const CsvMeta& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// Typed emitters used by the CLI (schemas documented in the README).
void write_region_csv(const std::string& path, const CsvMeta& meta,
                      const std::vector<RegionSample>& curve);
void write_dispersion_csv(const std::string& path, const CsvMeta& meta,
                          const LinearizationData& lin, double d, double R,
                          double alpha, int n_max);
void write_bifcoef_csv(const std::string& path, const CsvMeta& meta,
                       const std::vector<BifurcationCoefficients>& coeffs);
void write_sweep_csv(const std::string& path, const CsvMeta& meta,
                     const BifurcationDiagram& diagram);
void write_mass_csv(const std::string& path, const CsvMeta& meta,
                    const std::vector<MassPoint>& points);
// Final state over the reflected domain [-pi, pi].
void write_state_csv(const std::string& path, const CsvMeta& meta,
                     const FieldState& state, const Grid& grid);

// Minimal static SVG scatter/line plot.
struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
    std::string color = "#1f77b4";
    bool line = true;    // connect points
    bool markers = true; // draw circles
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

} // namespace memopat
