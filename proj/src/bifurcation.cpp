#include "memopat/bifurcation.hpp"

#include <cmath>
#include <numbers>

#include "memopat/stability.hpp"

namespace memopat {

EigenCoefficients eigen_coefficients(const LinearizationData& lin, double d,
                                     double R, int n) {
    if (lin.w_u == 0.0)
        throw DegenerateMap("eigen_coefficients: w_u = 0");
    const double nn = (double)n * n;
    EigenCoefficients c;
    c.M1 = -lin.w_u / lin.w_k;
    c.M2 = c.M1 / (1.0 + nn * R * R);
    c.M1s = (d * nn - lin.f_u) / lin.w_u;
    c.M2s = -R * R * lin.w_k * c.M1s;
    return c;
}

ThetaCoefficients theta_coefficients(const LinearizationData& lin, double d,
                                     double R, int n, double alpha_n) {
    if (lin.f_u == 0.0)
        throw GrowthDegenerate("theta_coefficients: f_u = 0 (no-growth case); "
                               "the quadratic correction is not defined by "
                               "this construction");
    const double nn = (double)n * n;
    const double us = lin.u_star;
    const EigenCoefficients eig = eigen_coefficients(lin, d, R, n);

    // Quadratic self-interaction of the null vector: the k-equation sees
    // w_uu q1^2 + 2 w_uk q1 q2 + w_kk q2^2 = W2 cos^2(nx).
    const double W2 =
        lin.w_uu + 2.0 * eig.M1 * lin.w_uk + eig.M1 * eig.M1 * lin.w_kk;

    ThetaCoefficients th;
    // Constant mode: cos^2 = (1 + cos 2nx)/2 sources both modes.  The
    // u-equation's constant part is f_u T1 + f_uu/2 = 0 (the advective
    // term has zero mean), the k-equation then fixes T2 = T3.
    th.t1_const = -lin.f_uu / (2.0 * lin.f_u);
    th.t2_const = -(0.5 * W2 + lin.w_u * th.t1_const) / lin.w_k;
    th.t3_const = th.t2_const;

    // cos(2nx) mode: the u- and k-equations couple T1 and T3, with the
    // elliptic equation eliminating T2 = (1 + 4 n^2 R^2) T3.
    const double c1 = 1.0 + 4.0 * nn * R * R;
    const double A11 = lin.f_u - 4.0 * d * nn;
    const double A12 = -4.0 * alpha_n * us * nn;
    const double b1 = 2.0 * alpha_n * eig.M2 * nn - 0.5 * lin.f_uu;
    const double A21 = lin.w_u;
    const double A22 = lin.w_k * c1;
    const double b2 = -0.5 * W2;
    const double det = A11 * A22 - A12 * A21;
    th.t1_cos = (b1 * A22 - A12 * b2) / det;
    th.t3_cos = (A11 * b2 - A21 * b1) / det;
    th.t2_cos = c1 * th.t3_cos;
    return th;
}

double alpha_curvature(const LinearizationData& lin, double d, double R, int n,
                       double alpha_n, const ThetaCoefficients& th) {
    const double nn = (double)n * n;
    const double us = lin.u_star;
    const double pi = std::numbers::pi;
    const EigenCoefficients eig = eigen_coefficients(lin, d, R, n);

    // Projection of the alpha-derivative term: <l, ((u* q3')', 0, 0)>.
    const double proj_alpha_u = -us * nn * eig.M2 * (pi / 2.0);

    // Cubic self-interaction: third u-derivatives of f and w along the
    // null direction (all pure-k partials of order >= 2 vanish).
    const double w_tri = lin.w_uuu + 3.0 * eig.M1 * lin.w_uuk +
                         3.0 * eig.M1 * eig.M1 * lin.w_ukk +
                         eig.M1 * eig.M1 * eig.M1 * lin.w_kkk;
    const double proj_cubic = (lin.f_uuu + eig.M1s * w_tri) * (3.0 * pi / 8.0);

    // Mixed quadratic term F_UU[q, Theta]: products of cos(nx) with the
    // constant and cos(2nx) parts of Theta project back onto cos(nx) with
    // weights 1 and 1/2 respectively; the advective part contributes
    // through (q1 T3' + T1 q3')'.
    const double w1 = lin.w_uu + eig.M1 * lin.w_uk;
    const double w2 = lin.w_uk + eig.M1 * lin.w_kk;
    const double proj_mixed =
        (pi / 2.0) *
        (-alpha_n * nn * th.t3_cos -
         alpha_n * nn * eig.M2 * (th.t1_const - 0.5 * th.t1_cos) +
         lin.f_uu * (th.t1_const + 0.5 * th.t1_cos) +
         eig.M1s * (w1 * (th.t1_const + 0.5 * th.t1_cos) +
                    w2 * (th.t2_const + 0.5 * th.t2_cos)));

    return -proj_cubic / (3.0 * proj_alpha_u) - proj_mixed / proj_alpha_u;
}

double alpha_curvature_quadrature(const LinearizationData& lin, double d,
                                  double R, int n, double alpha_n,
                                  const ThetaCoefficients& th, int n_panels) {
    const double us = lin.u_star;
    const double pi = std::numbers::pi;
    const EigenCoefficients eig = eigen_coefficients(lin, d, R, n);
    const double M1 = eig.M1, M2 = eig.M2, M1s = eig.M1s;

    // Composite Simpson over [0, pi]; n_panels must be even.
    auto simpson = [&](auto&& f) {
        const int m = n_panels % 2 == 0 ? n_panels : n_panels + 1;
        const double hq = pi / m;
        double s = f(0.0) + f(pi);
        for (int i = 1; i < m; ++i)
            s += f(i * hq) * (i % 2 == 1 ? 4.0 : 2.0);
        return s * hq / 3.0;
    };

    auto theta1 = [&](double x) { return th.t1_const + th.t1_cos * std::cos(2 * n * x); };
    auto theta2 = [&](double x) { return th.t2_const + th.t2_cos * std::cos(2 * n * x); };

    // <l, F_alphaU[q]>: u-component (u* q3')' = -u* n^2 M2 cos(nx).
    const double proj_alpha_u = simpson([&](double x) {
        return -us * n * n * M2 * std::cos(n * x) * std::cos(n * x);
    });

    // <l, F_UUU[q,q,q]>: u: f_uuu cos^3; k: (w_uuu + 3 M1 w_uuk + ...) cos^3.
    const double w_tri = lin.w_uuu + 3.0 * M1 * lin.w_uuk +
                         3.0 * M1 * M1 * lin.w_ukk + M1 * M1 * M1 * lin.w_kkk;
    const double proj_cubic = simpson([&](double x) {
        const double c = std::cos(n * x);
        return (lin.f_uuu + M1s * w_tri) * c * c * c * c;
    });

    // <l, F_UU[q, Theta]>: u-component f_uu q1 T1 + alpha_n (q1 T3' + T1 q3')',
    // with the derivative expanded analytically:
    //   g(x)  = -2n t3m cos(nx) sin(2nx) - n M2 sin(nx) (t1c + t1m cos 2nx)
    //   g'(x) = 2n^2 t3m [sin(nx) sin(2nx) - 2 cos(nx) cos(2nx)]
    //           - n^2 M2 [cos(nx)(t1c + t1m cos 2nx) - 2 t1m sin(nx) sin(2nx)]
    auto advective_div = [&](double x) {
        const double sn = std::sin(n * x), cn = std::cos(n * x);
        const double s2 = std::sin(2 * n * x), c2 = std::cos(2 * n * x);
        return 2.0 * n * n * th.t3_cos * (sn * s2 - 2.0 * cn * c2) -
               (double)n * n * M2 *
                   (cn * (th.t1_const + th.t1_cos * c2) - 2.0 * th.t1_cos * sn * s2);
    };
    const double proj_mixed = simpson([&](double x) {
        const double c = std::cos(n * x);
        const double u_comp = lin.f_uu * c * theta1(x) + alpha_n * advective_div(x);
        const double k_comp = lin.w_uu * c * theta1(x) +
                              lin.w_uk * (c * theta2(x) + M1 * c * theta1(x)) +
                              lin.w_kk * M1 * c * theta2(x);
        return (u_comp + M1s * k_comp) * c;
    });

    return -proj_cubic / (3.0 * proj_alpha_u) - proj_mixed / proj_alpha_u;
}

std::pair<Direction, BranchStability> classify(const LinearizationData& lin,
                                               double alpha_dd0) {
    if (alpha_dd0 == 0.0)
        throw DegenerateCurvature("classify: alpha''(0) = 0; direction is "
                                  "decided at higher order");
    if (lin.w_u == 0.0)
        throw DegenerateMap("classify: w_u = 0");
    const Direction dir = alpha_dd0 > 0.0 ? Direction::Forward : Direction::Backward;
    // w_u > 0: instability lies at alpha below the threshold, so a branch
    // bending backward (down in alpha) enters the unstable region and is
    // stable; mirrored for w_u < 0.
    const bool stable = (lin.w_u > 0.0) ? (alpha_dd0 < 0.0) : (alpha_dd0 > 0.0);
    return {dir, stable ? BranchStability::Stable : BranchStability::Unstable};
}

double predicted_branch(double alpha_n, double alpha_dd0, double alpha) {
    const double ratio = 2.0 * (alpha - alpha_n) / alpha_dd0;
    if (ratio < 0.0)
        throw WrongSide("predicted_branch: no local branch on this side of "
                        "the threshold");
    return std::sqrt(ratio);
}

BifurcationCoefficients bifurcation_coefficients(const LinearizationData& lin,
                                                 double d, double R, int n) {
    BifurcationCoefficients out;
    out.n = n;
    out.alpha_n = alpha_threshold(lin, d, R, n, /*growth_present=*/true);
    out.eig = eigen_coefficients(lin, d, R, n);
    out.theta = theta_coefficients(lin, d, R, n, out.alpha_n);
    out.alpha_dd0 = alpha_curvature(lin, d, R, n, out.alpha_n, out.theta);

    const double quad =
        alpha_curvature_quadrature(lin, d, R, n, out.alpha_n, out.theta);
    const double rel = std::abs(out.alpha_dd0 - quad) /
                       std::max(std::abs(out.alpha_dd0), 1e-30);
    if (rel > 1e-6)
        throw CrossCheckError("bifurcation_coefficients: closed-form curvature " +
                              std::to_string(out.alpha_dd0) +
                              " disagrees with quadrature " + std::to_string(quad));

    auto [dir, stab] = classify(lin, out.alpha_dd0);
    out.direction = dir;
    out.branch_stability = stab;
    return out;
}

} // namespace memopat
