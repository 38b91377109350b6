#include "memopat/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace memopat {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // \n endings everywhere
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    return out;
}

const char* branch_name(Branch b) {
    return b == Branch::Perturbation ? "perturbation" : "continuation";
}

const char* phase_name(Phase p) {
    switch (p) {
    case Phase::InPhase: return "in_phase";
    case Phase::OutOfPhase: return "out_of_phase";
    default: return "flat";
    }
}

} // namespace

void write_csv(const std::string& path, const CsvMeta& meta,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_or_throw(path);
    out << "# " << kToolVersion << "\n";
    out << "# command = " << meta.command << "\n";
    for (const auto& [k, v] : meta.entries)
        out << "# " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_region_csv(const std::string& path, const CsvMeta& meta,
                      const std::vector<RegionSample>& curve) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(curve.size());
    for (const auto& s : curve)
        rows.push_back({format_double(s.R), format_double(s.alpha_crit),
                        format_double(std::abs(s.alpha_crit)),
                        std::to_string(s.n_crit)});
    write_csv(path, meta, {"R", "alpha_crit_signed", "abs_alpha_crit", "n_crit"},
              rows);
}

void write_dispersion_csv(const std::string& path, const CsvMeta& meta,
                          const LinearizationData& lin, double d, double R,
                          double alpha, int n_max) {
    std::vector<std::vector<std::string>> rows;
    for (int n = 0; n <= n_max; ++n) {
        const ModeEigenvalues ev = eigenvalues(lin, d, R, alpha, n);
        rows.push_back({std::to_string(n),
                        format_double(ev.lambda_plus.real()),
                        format_double(ev.lambda_plus.imag()),
                        format_double(ev.lambda_minus.real()),
                        format_double(ev.lambda_minus.imag()),
                        format_double(ev.extra)});
    }
    write_csv(path, meta,
              {"n", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus",
               "im_lambda_minus", "extra"},
              rows);
}

void write_bifcoef_csv(const std::string& path, const CsvMeta& meta,
                       const std::vector<BifurcationCoefficients>& coeffs) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& c : coeffs) {
        rows.push_back(
            {std::to_string(c.n), format_double(c.alpha_n),
             format_double(c.eig.M1), format_double(c.eig.M2),
             format_double(c.eig.M1s), format_double(c.eig.M2s),
             format_double(c.theta.t1_const), format_double(c.theta.t1_cos),
             format_double(c.theta.t2_const), format_double(c.theta.t2_cos),
             format_double(c.theta.t3_const), format_double(c.theta.t3_cos),
             format_double(c.alpha_dd0),
             c.direction == Direction::Forward ? "forward" : "backward",
             c.branch_stability == BranchStability::Stable ? "stable"
                                                           : "unstable"});
    }
    write_csv(path, meta,
              {"n", "alpha_n", "M1", "M2", "M1s", "M2s", "theta1_const",
               "theta1_cos", "theta2_const", "theta2_cos", "theta3_const",
               "theta3_cos", "alpha_dd0", "direction", "stability"},
              rows);
}

void write_sweep_csv(const std::string& path, const CsvMeta& meta,
                     const BifurcationDiagram& diagram) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(diagram.records.size());
    for (const auto& r : diagram.records)
        rows.push_back({format_double(r.alpha), branch_name(r.branch),
                        format_double(r.amplitude), std::to_string(r.peak_count),
                        format_double(r.mean_u), phase_name(r.phase_sign),
                        r.converged ? "1" : "0", format_double(r.t_final)});
    write_csv(path, meta,
              {"alpha", "branch", "amplitude", "peak_count", "mean_u", "phase",
               "converged", "t_final"},
              rows);
}

void write_mass_csv(const std::string& path, const CsvMeta& meta,
                    const std::vector<MassPoint>& points) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(points.size());
    for (const auto& p : points)
        rows.push_back({format_double(p.R), format_double(p.alpha),
                        format_double(p.mean_u), format_double(p.amplitude),
                        p.converged ? "1" : "0"});
    write_csv(path, meta, {"R", "alpha", "mean_u", "amplitude", "converged"},
              rows);
}

void write_state_csv(const std::string& path, const CsvMeta& meta,
                     const FieldState& state, const Grid& grid) {
    // Emit the even reflection onto [-pi, pi]: x_j = -pi + j*h, value at
    // node |j - N|.
    const int N = grid.n_cells;
    std::vector<std::vector<std::string>> rows;
    rows.reserve(2 * N + 1);
    for (int j = 0; j <= 2 * N; ++j) {
        const int i = std::abs(j - N);
        const double x = -std::numbers::pi + j * grid.h;
        rows.push_back({format_double(x), format_double(state.u[i]),
                        format_double(state.k[i]), format_double(state.v[i])});
    }
    write_csv(path, meta, {"x", "u", "k", "v"}, rows);
}

// ---------------------------------------------------------------------
// Minimal SVG plotting

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    const double W = 720, H = 480;
    const double ml = 72, mr = 24, mt = 40, mb = 48; // margins

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (x_lo > x_hi) { // no data: draw an empty frame
        x_lo = 0; x_hi = 1; y_lo = 0; y_hi = 1;
    }
    if (x_hi == x_lo) { x_hi += 0.5; x_lo -= 0.5; }
    if (y_hi == y_lo) { y_hi += 0.5; y_lo -= 0.5; }
    const double x_pad = 0.04 * (x_hi - x_lo), y_pad = 0.06 * (y_hi - y_lo);
    x_lo -= x_pad; x_hi += x_pad; y_lo -= y_pad; y_hi += y_pad;

    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb); };

    std::ofstream out = open_or_throw(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // Axes frame and ticks.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr
        << "\" height=\"" << H - mt - mb
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / n_ticks;
        const double yv = y_lo + (y_hi - y_lo) * i / n_ticks;
        char xbuf[32], ybuf[32];
        std::snprintf(xbuf, sizeof xbuf, "%.4g", xv);
        std::snprintf(ybuf, sizeof ybuf, "%.4g", yv);
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << H - mb << "\" x2=\""
            << px(xv) << "\" y2=\"" << H - mb + 5
            << "\" stroke=\"#444\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(xv) << "\" y=\"" << H - mb + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">" << xbuf << "</text>\n"
            << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
            << ml << "\" y2=\"" << py(yv)
            << "\" stroke=\"#444\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">" << ybuf << "</text>\n";
    }
    out << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << (mt + H - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 16 " << (mt + H - mb) / 2
        << ")\">" << y_label << "</text>\n";

    // Series: polyline and/or markers, plus a small legend.
    double legend_y = mt + 16;
    for (const auto& s : series) {
        if (s.line && s.points.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points)
                out << px(x) << "," << py(y) << " ";
            out << "\"/>\n";
        }
        if (s.markers) {
            for (const auto& [x, y] : s.points)
                out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y)
                    << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
        }
        out << "<rect x=\"" << W - mr - 150 << "\" y=\"" << legend_y - 9
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n"
            << "<text x=\"" << W - mr - 135 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
            << "</text>\n";
        legend_y += 16;
    }
    out << "</svg>\n";
}

} // namespace memopat
