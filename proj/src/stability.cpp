#include "memopat/stability.hpp"

#include <cassert>
#include <cmath>

namespace memopat {

namespace {

void require_nondegenerate(const LinearizationData& lin) {
    if (lin.w_u == 0.0)
        throw DegenerateMap("w_u = 0: the homogeneous state is unconditionally "
                            "stable and no critical threshold exists");
}

} // namespace

double alpha_threshold(const LinearizationData& lin, double d, double R, int n,
                       bool growth_present) {
    require_nondegenerate(lin);
    assert(n >= 1 && R > 0.0);
    const double nn = (double)n * n;
    const double screen = 1.0 + nn * R * R;
    if (growth_present)
        return screen * (d * nn - lin.f_u) * lin.w_k / (lin.u_star * lin.w_u * nn);
    // f_u = 0 cancels one factor of n^2.
    return screen * d * lin.w_k / (lin.u_star * lin.w_u);
}

std::pair<double, int> critical_threshold(const LinearizationData& lin, double d,
                                          double R, bool growth_present,
                                          int n_max) {
    require_nondegenerate(lin);
    if (!growth_present) {
        // Thresholds grow with n in magnitude; the first mode always wins,
        // so the emergent pattern has a single peak.
        return {alpha_threshold(lin, d, R, 1, false), 1};
    }
    // The continuous extremum in z = n^2 sits at z = sqrt(-f_u/d)/R; the
    // curve is unimodal, so scanning up to a couple of modes past it
    // brackets the integer extremum.
    int hi = n_max;
    if (lin.f_u < 0.0) {
        const double n_cont = std::pow(-lin.f_u / (d * R * R), 0.25);
        hi = std::max(n_max, (int)std::ceil(n_cont) + 2);
    }
    const bool want_max = lin.w_u > 0.0; // thresholds negative: max = closest to 0
    double best = alpha_threshold(lin, d, R, 1, true);
    int best_n = 1;
    for (int n = 2; n <= hi; ++n) {
        const double a = alpha_threshold(lin, d, R, n, true);
        if ((want_max && a > best) || (!want_max && a < best)) {
            best = a;
            best_n = n;
        }
    }
    return {best, best_n};
}

ModeEigenvalues eigenvalues(const LinearizationData& lin, double d, double R,
                            double alpha, int n) {
    const double nn = (double)n * n;
    const double T = -(d * nn - lin.f_u - lin.w_k);
    const double D = -(d * nn - lin.f_u) * lin.w_k +
                     alpha * lin.u_star * lin.w_u * nn / (1.0 + nn * R * R);
    const double disc = T * T - 4.0 * D;
    ModeEigenvalues ev;
    ev.extra = lin.w_k;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        ev.lambda_plus = 0.5 * (T + root);
        ev.lambda_minus = 0.5 * (T - root);
    } else {
        const double imag = 0.5 * std::sqrt(-disc);
        ev.lambda_plus = {0.5 * T, imag};
        ev.lambda_minus = {0.5 * T, -imag};
    }
    return ev;
}

double transversality(const LinearizationData& lin, double d, double R, int n) {
    require_nondegenerate(lin);
    const double nn = (double)n * n;
    return -lin.u_star * lin.w_u * nn /
           ((1.0 + nn * R * R) * (d * nn - lin.f_u - lin.w_k));
}

Regime classify_regime(const LinearizationData& lin) {
    if (lin.w_u > 0.0) return Regime::AttractiveMap;
    if (lin.w_u < 0.0) return Regime::RepulsiveMap;
    return Regime::NeverUnstable;
}

StabilityReport stability_report(const LinearizationData& lin, double d, double R,
                                 bool growth_present, int n_max) {
    StabilityReport rep;
    rep.lin = lin;
    rep.regime = classify_regime(lin);
    if (rep.regime == Regime::NeverUnstable)
        return rep; // no thresholds exist; leave the map empty
    for (int n = 1; n <= n_max; ++n)
        rep.alpha_n[n] = alpha_threshold(lin, d, R, n, growth_present);
    auto [ac, nc] = critical_threshold(lin, d, R, growth_present, n_max);
    rep.alpha_crit = ac;
    rep.n_crit = nc;
    return rep;
}

std::vector<RegionSample> stability_region(const LinearizationData& lin, double d,
                                           bool growth_present, double R_lo,
                                           double R_hi, int n_samples,
                                           int n_max) {
    assert(R_lo > 0.0 && R_hi >= R_lo && n_samples >= 1);
    std::vector<RegionSample> curve;
    curve.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = n_samples == 1 ? 0.0 : (double)i / (n_samples - 1);
        const double R = R_lo + t * (R_hi - R_lo);
        auto [ac, nc] = critical_threshold(lin, d, R, growth_present, n_max);
        curve.push_back({R, ac, nc});
    }
    return curve;
}

} // namespace memopat
