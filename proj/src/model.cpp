#include "memopat/model.hpp"

#include <cmath>
#include <numbers>

namespace memopat {

double eval_f(const ModelSpec& spec, double u, int order) {
    const GrowthModel& g = spec.growth;
    if (g.kind == GrowthModel::Kind::NoGrowth)
        return 0.0;
    // f(u) = r u (1 - u/u_cap)
    switch (order) {
    case 0: return g.r * u * (1.0 - u / g.u_cap);
    case 1: return g.r * (1.0 - 2.0 * u / g.u_cap);
    case 2: return -2.0 * g.r / g.u_cap;
    case 3: return 0.0;
    default: throw ValidationError("eval_f: order must be 0..3");
    }
}

namespace {

// g1(u) = rho u^2/(1+u) = rho (u - 1 + 1/(1+u)); derivatives follow from
// the partial-fraction form, avoiding quotient-rule error buildup.
double ratio_quadratic(double rho, double u, int order) {
    const double s = 1.0 / (1.0 + u);
    switch (order) {
    case 0: return rho * u * u * s;
    case 1: return rho * (1.0 - s * s);
    case 2: return 2.0 * rho * s * s * s;
    case 3: return -6.0 * rho * s * s * s * s;
    default: throw ValidationError("eval_g: order must be 0..3");
    }
}

// g1(u) = rho u/(1+u) = rho (1 - 1/(1+u)).
double ratio_linear(double rho, double u, int order) {
    const double s = 1.0 / (1.0 + u);
    switch (order) {
    case 0: return rho * u * s;
    case 1: return rho * s * s;
    case 2: return -2.0 * rho * s * s * s;
    case 3: return 6.0 * rho * s * s * s * s;
    default: throw ValidationError("eval_g: order must be 0..3");
    }
}

// Smooth step added to g2: (eps/2)(1 + (2/pi) atan(gamma (u - u0))).
// With t = gamma (u - u0):
//   d/du   = (eps gamma / pi) / (1+t^2)
//   d2/du2 = -(2 eps gamma^2 / pi) t / (1+t^2)^2
//   d3/du3 =  (2 eps gamma^3 / pi) (3 t^2 - 1) / (1+t^2)^3
double smooth_step(double eps, double gamma, double u0, double u, int order) {
    const double t = gamma * (u - u0);
    const double q = 1.0 + t * t;
    const double pi = std::numbers::pi;
    switch (order) {
    case 0: return 0.5 * eps * (1.0 + (2.0 / pi) * std::atan(t));
    case 1: return (eps * gamma / pi) / q;
    case 2: return -(2.0 * eps * gamma * gamma / pi) * t / (q * q);
    case 3: return (2.0 * eps * gamma * gamma * gamma / pi) * (3.0 * t * t - 1.0) / (q * q * q);
    default: throw ValidationError("eval_g: order must be 0..3");
    }
}

// Order-0 evaluation in extended precision for the difference stencils:
// third differences divide by h^3, so double-precision cancellation noise
// (~1e-16/h^3) would swamp the truncation error at reasonable steps.
long double value0_ld(const ModelSpec& spec, int which, long double x) {
    if (which == 0) {
        const GrowthModel& g = spec.growth;
        if (g.kind == GrowthModel::Kind::NoGrowth)
            return 0.0L;
        return static_cast<long double>(g.r) * x *
               (1.0L - x / static_cast<long double>(g.u_cap));
    }
    const EncodingFamily& e = spec.encoding;
    if (which == 1) {
        const long double s = x / (1.0L + x);
        return e.g1_kind == EncodingFamily::G1::RatioQuadratic
                   ? static_cast<long double>(e.rho) * x * s
                   : static_cast<long double>(e.rho) * s;
    }
    long double base =
        static_cast<long double>(e.mu) + static_cast<long double>(e.beta) * x;
    if (e.perturbed) {
        const long double pi = 3.14159265358979323846264338327950288L;
        const long double t =
            static_cast<long double>(e.gamma) *
            (x - static_cast<long double>(constant_state_density(spec)));
        base += 0.5L * static_cast<long double>(e.eps) *
                (1.0L + (2.0L / pi) * std::atan(t));
    }
    return base;
}

} // namespace

double eval_g(const ModelSpec& spec, Which which, double u, int order) {
    const EncodingFamily& e = spec.encoding;
    if (which == Which::g1) {
        return e.g1_kind == EncodingFamily::G1::RatioQuadratic
                   ? ratio_quadratic(e.rho, u, order)
                   : ratio_linear(e.rho, u, order);
    }
    // g2(u) = mu + beta u (+ optional smooth step centered at u*)
    double base;
    switch (order) {
    case 0: base = e.mu + e.beta * u; break;
    case 1: base = e.beta; break;
    case 2: case 3: base = 0.0; break;
    default: throw ValidationError("eval_g: order must be 0..3");
    }
    if (e.perturbed)
        base += smooth_step(e.eps, e.gamma, constant_state_density(spec), u, order);
    return base;
}

double constant_state_density(const ModelSpec& spec) {
    if (spec.growth.kind == GrowthModel::Kind::Logistic)
        return spec.growth.u_cap;
    if (spec.u_star_override && *spec.u_star_override > 0.0)
        return *spec.u_star_override;
    throw NoConstantState(
        "no positive constant state: growth has no positive zero and "
        "u_star_override is not set");
}

LinearizationData linearize(const ModelSpec& spec) {
    LinearizationData lin;
    const double us = constant_state_density(spec);
    lin.u_star = us;

    const double g1 = eval_g(spec, Which::g1, us, 0);
    const double g2 = eval_g(spec, Which::g2, us, 0);
    lin.k_star = g1 / g2;
    lin.v_star = lin.k_star; // constant k forces v = k in the screened solve

    lin.f_u = eval_f(spec, us, 1);
    lin.f_uu = eval_f(spec, us, 2);
    lin.f_uuu = eval_f(spec, us, 3);

    // w(u,k) = g1(u) - g2(u) k: affine in k, so only the pure-u partials
    // and the mixed u..uk partials survive.
    const double g1p = eval_g(spec, Which::g1, us, 1);
    const double g2p = eval_g(spec, Which::g2, us, 1);
    const double g1pp = eval_g(spec, Which::g1, us, 2);
    const double g2pp = eval_g(spec, Which::g2, us, 2);
    const double g1ppp = eval_g(spec, Which::g1, us, 3);
    const double g2ppp = eval_g(spec, Which::g2, us, 3);

    lin.w_u = g1p - g2p * lin.k_star;
    lin.w_k = -g2;
    lin.w_uu = g1pp - g2pp * lin.k_star;
    lin.w_uk = -g2p;
    lin.w_kk = 0.0;
    lin.w_uuu = g1ppp - g2ppp * lin.k_star;
    lin.w_uuk = -g2pp;
    lin.w_ukk = 0.0;
    lin.w_kkk = 0.0;
    return lin;
}

DerivativeCheck finite_difference_check(const ModelSpec& spec, double u,
                                        double step) {
    DerivativeCheck rep;
    const double h = step;

    auto update = [&](double analytic, double numeric, int order) {
        const double scale = std::max(std::abs(analytic), 1.0);
        const double rel = std::abs(analytic - numeric) / scale;
        if (rel > rep.max_rel_error) {
            rep.max_rel_error = rel;
            rep.worst_value = analytic;
            rep.worst_order = order;
        }
    };

    const long double hl = h;
    auto check = [&](int which) {
        auto fn = [&](long double x) { return value0_ld(spec, which, x); };
        const long double m2 = fn(u - 2 * hl), m1 = fn(u - hl), p0 = fn(u),
                          p1 = fn(u + hl), p2 = fn(u + 2 * hl);
        auto deriv = [&](int order) {
            if (which == 0) return eval_f(spec, u, order);
            return eval_g(spec, which == 1 ? Which::g1 : Which::g2, u, order);
        };
        update(deriv(1), static_cast<double>((p1 - m1) / (2 * hl)), 1);
        update(deriv(2), static_cast<double>((p1 - 2 * p0 + m1) / (hl * hl)), 2);
        update(deriv(3),
               static_cast<double>((p2 - 2 * p1 + 2 * m1 - m2) /
                                   (2 * hl * hl * hl)),
               3);
    };
    check(0);
    check(1);
    check(2);
    return rep;
}

} // namespace memopat
