#pragma once

#include <complex>
#include <map>
#include <vector>

#include "memopat/model.hpp"

namespace memopat {

enum class Regime { AttractiveMap, RepulsiveMap, NeverUnstable };

// Roots of the per-mode quadratic lambda^2 - T lambda + D, plus the
// residual real eigenvalue w_k carried by map perturbations that leave u
// unchanged.
struct ModeEigenvalues {
    std::complex<double> lambda_plus;  // larger real part
    std::complex<double> lambda_minus;
    double extra; // = w_k
};

struct RegionSample {
    double R;
    double alpha_crit; // signed
    int n_crit;
};

struct StabilityReport {
    LinearizationData lin;
    std::map<int, double> alpha_n; // per-mode thresholds, n = 1..n_max
    double alpha_crit = 0.0;       // signed extremal threshold
    int n_crit = 0;
    Regime regime = Regime::NeverUnstable;
};

// Per-mode critical aggregation strength.  With growth:
//   alpha_n(R) = (1 + n^2 R^2)(d n^2 - f_u) w_k / (u* w_u n^2).
// Without growth f_u = 0 and an n^2 cancels, leaving the n-independent
//   alpha*(R) = (1 + n^2 R^2) d w_k / (u* w_u) evaluated per mode; the
// extremum is then always taken at n = 1.
double alpha_threshold(const LinearizationData& lin, double d, double R, int n,
                       bool growth_present);

// Extremal threshold and the smallest mode attaining it: max over n when
// w_u > 0 (all thresholds negative), min when w_u < 0 (all positive).
// Scans n in [1, max(n_max, ceil(n_cont)+2)] where n_cont is the real
// optimum (-f_u/(d R^2))^{1/4}; the per-mode curve is unimodal in n^2, so
// the extended range always brackets the integer extremum.
std::pair<double, int> critical_threshold(const LinearizationData& lin, double d,
                                          double R, bool growth_present,
                                          int n_max = 64);

// Roots of lambda^2 - T lambda + D with
//   T = -(d n^2 - f_u - w_k),
//   D = -(d n^2 - f_u) w_k + alpha u* w_u n^2/(1 + n^2 R^2).
ModeEigenvalues eigenvalues(const LinearizationData& lin, double d, double R,
                            double alpha, int n);

// d(lambda)/d(alpha) of the root crossing zero at alpha = alpha_n:
//   -u* w_u n^2 / [(1 + n^2 R^2)(d n^2 - f_u - w_k)].
double transversality(const LinearizationData& lin, double d, double R, int n);

Regime classify_regime(const LinearizationData& lin);

StabilityReport stability_report(const LinearizationData& lin, double d, double R,
                                 bool growth_present, int n_max = 64);

// Boundary curve of the stability region in the (R, alpha) plane.
std::vector<RegionSample> stability_region(const LinearizationData& lin, double d,
                                           bool growth_present, double R_lo,
                                           double R_hi, int n_samples,
                                           int n_max = 64);

} // namespace memopat
