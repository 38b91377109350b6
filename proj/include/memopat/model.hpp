#pragma once

#include <optional>

#include "memopat/errors.hpp"

namespace memopat {

// Growth term f(u).  Logistic gives f(u) = r u (1 - u/u_cap); NoGrowth is
// the conservative case f == 0, in which the constant state is set by the
// initial mean instead of a zero of f.
struct GrowthModel {
    enum class Kind { Logistic, NoGrowth };
    Kind kind = Kind::NoGrowth;
    double r = 1.0;
    double u_cap = 1.0;

    static GrowthModel logistic(double r, double u_cap) {
        return {Kind::Logistic, r, u_cap};
    }
    static GrowthModel no_growth() { return {Kind::NoGrowth, 0.0, 0.0}; }
};

// Encoding pair (g1, g2) driving the map ODE k_t = g1(u) - g2(u) k.
// g2(u) = mu + beta*u throughout; g1 is one of two saturating families.
// SmoothStepPerturbed keeps one of those g1 choices and adds a smooth
// arctan step to g2:  g2 += (eps/2) (1 + (2/pi) atan(gamma (u - u*))).
struct EncodingFamily {
    enum class G1 { RatioQuadratic, RatioLinear }; // rho u^2/(1+u) | rho u/(1+u)
    G1 g1_kind = G1::RatioQuadratic;
    double rho = 1.0;
    double mu = 0.15;
    double beta = 0.5;

    bool perturbed = false; // SmoothStepPerturbed variant
    double eps = 0.05;
    double gamma = 10.0;
};

struct ModelSpec {
    double d = 1.0;     // diffusion rate, > 0
    double alpha = 0.0; // aggregation strength, signed
    double R = 1.0;     // perceptual radius, > 0
    GrowthModel growth;
    EncodingFamily encoding;
    // Required for NoGrowth: the constant state is the initial mean density.
    std::optional<double> u_star_override;
};

// Everything the stability and bifurcation formulas need at the constant
// state (u*, k*, v*), with w(u,k) = g1(u) - g2(u) k.  w is affine in k, so
// all k-partials of order >= 2 vanish identically.
struct LinearizationData {
    double u_star = 0, k_star = 0, v_star = 0;
    double f_u = 0, f_uu = 0, f_uuu = 0;
    double w_u = 0, w_k = 0;
    double w_uu = 0, w_uk = 0, w_kk = 0;
    double w_uuu = 0, w_uuk = 0, w_ukk = 0, w_kkk = 0;
};

enum class Which { g1, g2 };

// Analytic evaluation of f, g1, g2 and their derivatives (orders 0..3).
// The curvature formula needs third derivatives, so these are closed-form
// rather than finite differences.
double eval_f(const ModelSpec& spec, double u, int order);
double eval_g(const ModelSpec& spec, Which which, double u, int order);

// Positive constant state: the logistic zero u_cap, or the override.
// Throws NoConstantState when neither is available.
double constant_state_density(const ModelSpec& spec);

LinearizationData linearize(const ModelSpec& spec);

// Max relative error of analytic derivatives (orders 1..3 of f, g1, g2)
// against central finite differences with the given step.
struct DerivativeCheck {
    double max_rel_error = 0;
    double worst_value = 0;   // analytic value at the worst entry
    int worst_order = 0;
};
DerivativeCheck finite_difference_check(const ModelSpec& spec, double u,
                                        double step = 1e-4);

} // namespace memopat
