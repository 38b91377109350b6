#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "memopat/bifurcation.hpp"
#include "memopat/stability.hpp"

using namespace memopat;

namespace {

ModelSpec example1() {
    ModelSpec spec;
    spec.growth = GrowthModel::logistic(1.0, 1.0);
    return spec;
}

ModelSpec example2() {
    ModelSpec spec = example1();
    spec.encoding.g1_kind = EncodingFamily::G1::RatioLinear;
    return spec;
}

ModelSpec example3() {
    ModelSpec spec = example1();
    spec.encoding.perturbed = true;
    return spec;
}

struct Bench { double R; int n; double alpha_n; double curv; };

// Values pinned by two independent implementations (closed form and the
// quadrature projection), and corroborated by measured steady-state branch
// slopes of the full solver.
const Bench kBench1[] = {
    {0.12, 3, -2.2327766081871343, -0.6099576720343053},
    {0.30, 2, -3.0242105263157883, -0.4844692930386883},
    {2.00, 1, -17.789473684210524, 1.974174239847084},
};
const Bench kBench2[] = {
    {0.12, 3, 6.060393650793652, 5.370837635662171},
    {0.30, 2, 8.208571428571428, 13.785220394280167},
    {2.00, 1, 48.2857142857143, 89.27659540006485},
};
const Bench kBench3[] = {
    {0.12, 3, -3.2368359982391093, 72.88385851727847},
    {0.30, 2, -4.3841705712693315, 99.24340208255695},
    {2.00, 1, -25.789238654525484, 590.9313029462547},
};

} // namespace

TEST_CASE("eigen coefficients at the benchmark point") {
    const LinearizationData lin = linearize(example1());
    const EigenCoefficients ec = eigen_coefficients(lin, 1.0, 0.3, 2);
    CHECK(ec.M1 == doctest::Approx(0.5622).epsilon(2e-4));
    CHECK(ec.M2 == doctest::Approx(0.4134).epsilon(2e-4));
    CHECK(ec.M2 / ec.M1 == doctest::Approx(1.0 / 1.36).epsilon(1e-12));
    // exact forms
    CHECK(ec.M1 == doctest::Approx(-lin.w_u / lin.w_k).epsilon(1e-14));
    CHECK(ec.M1s == doctest::Approx((4.0 - lin.f_u) / lin.w_u).epsilon(1e-14));
    CHECK(ec.M2s ==
          doctest::Approx(-0.09 * lin.w_k * ec.M1s).epsilon(1e-14));

    const LinearizationData lin2 = linearize(example2());
    const EigenCoefficients ec2 = eigen_coefficients(lin2, 1.0, 0.3, 2);
    CHECK(ec2.M1 == doctest::Approx(-0.2071).epsilon(3e-4));
    CHECK(ec2.M1 < 0.0); // map perturbation out of phase with density
}

TEST_CASE("null vector annihilates the per-mode linearization") {
    // With q = (1, M1, M2) cos(nx): the mode-n block of the linearization at
    // alpha_n applied to q must vanish: checked through the dispersion
    // machinery by evaluating the 2x2 system on (1, M1) plus the screened
    // relation M2 = M1/(1+n^2 R^2).
    for (const ModelSpec& spec : {example1(), example2()}) {
        const LinearizationData lin = linearize(spec);
        for (auto [R, n] : std::vector<std::pair<double, int>>{
                 {0.12, 3}, {0.3, 2}, {2.0, 1}}) {
            const double an = alpha_threshold(lin, 1.0, R, n, true);
            const EigenCoefficients ec = eigen_coefficients(lin, 1.0, R, n);
            const double r1 = (-1.0 * n * n - lin.f_u * (-1.0)) * 0.0; // placeholder
            (void)r1;
            // u-row: (-d n^2 + f_u) * 1 + alpha_n u* (-n^2) M2 = 0
            const double row_u =
                (-1.0 * n * n + lin.f_u) + an * lin.u_star * (-(double)n * n) * ec.M2;
            // k-row: w_u * 1 + w_k * M1 = 0
            const double row_k = lin.w_u + lin.w_k * ec.M1;
            // v-row: -n^2 M2 - (M2 - M1)/R^2 = 0
            const double row_v = -(double)n * n * ec.M2 - (ec.M2 - ec.M1) / (R * R);
            CHECK(std::abs(row_u) < 1e-10);
            CHECK(std::abs(row_k) < 1e-10);
            CHECK(std::abs(row_v) < 1e-10);
        }
    }
}

TEST_CASE("theta solves the second-order system: residual by quadrature") {
    // Independent oracle: plug Theta back into the linearized operator and
    // add the quadratic forcing assembled from the null vector; the residual
    // must vanish identically (the system is solved in closed form).
    for (const ModelSpec& spec : {example1(), example2(), example3()}) {
        const LinearizationData lin = linearize(spec);
        for (auto [R, n] : std::vector<std::pair<double, int>>{
                 {0.12, 3}, {0.3, 2}, {2.0, 1}, {0.8, 1}}) {
            const double an = alpha_threshold(lin, 1.0, R, n, true);
            const EigenCoefficients ec = eigen_coefficients(lin, 1.0, R, n);
            const ThetaCoefficients th = theta_coefficients(lin, 1.0, R, n, an);

            const double W2 = lin.w_uu + 2 * ec.M1 * lin.w_uk +
                              ec.M1 * ec.M1 * lin.w_kk;
            double r1 = 0, r2 = 0, r3 = 0;
            const int samples = 541;
            for (int j = 0; j <= samples; ++j) {
                const double x = 3.14159265358979323846 * j / samples;
                const double c2 = std::cos(2 * n * x);
                const double cc = std::cos(n * x) * std::cos(n * x);
                const double t1 = th.t1_const + th.t1_cos * c2;
                const double t2 = th.t2_const + th.t2_cos * c2;
                const double t3 = th.t3_const + th.t3_cos * c2;
                const double t1pp = -4.0 * n * n * th.t1_cos * c2;
                const double t3pp = -4.0 * n * n * th.t3_cos * c2;

                const double L1 = 1.0 * t1pp + an * lin.u_star * t3pp + lin.f_u * t1;
                const double F1 = lin.f_uu * cc + 2 * an * (-(double)n * n * ec.M2 * c2);
                const double L2 = lin.w_u * t1 + lin.w_k * t2;
                const double F2 = W2 * cc;
                const double L3 = t3pp - (t3 - t2) / (R * R);

                r1 = std::max(r1, std::abs(L1 + F1));
                r2 = std::max(r2, std::abs(L2 + F2));
                r3 = std::max(r3, std::abs(L3));
            }
            CHECK(r1 < 1e-9);
            CHECK(r2 < 1e-9);
            CHECK(r3 < 1e-9);
        }
    }
}

TEST_CASE("theta internal relations") {
    const LinearizationData lin = linearize(example1());
    for (auto [R, n] : std::vector<std::pair<double, int>>{{0.3, 2}, {2.0, 1}}) {
        const double an = alpha_threshold(lin, 1.0, R, n, true);
        const ThetaCoefficients th = theta_coefficients(lin, 1.0, R, n, an);
        // screened equation ties the v-correction to the k-correction:
        // constants are equal, the cos(2nx) parts differ by 1 + 4 n^2 R^2.
        CHECK(th.t3_const == doctest::Approx(th.t2_const).epsilon(1e-13));
        CHECK(th.t2_cos ==
              doctest::Approx((1 + 4.0 * n * n * R * R) * th.t3_cos).epsilon(1e-13));
        // Logistic(1,1): f_uu = -2, f_u = -1 -> constant density correction -1
        CHECK(th.t1_const == doctest::Approx(-1.0).epsilon(1e-13));
    }
}

TEST_CASE("theta depends on the mode only through n^2") {
    const LinearizationData lin = linearize(example1());
    const double an = alpha_threshold(lin, 1.0, 0.3, 2, true);
    const ThetaCoefficients a = theta_coefficients(lin, 1.0, 0.3, 2, an);
    const ThetaCoefficients b = theta_coefficients(lin, 1.0, 0.3, -2, an);
    CHECK(a.t1_cos == doctest::Approx(b.t1_cos).epsilon(1e-15));
    CHECK(a.t2_cos == doctest::Approx(b.t2_cos).epsilon(1e-15));
    CHECK(a.t3_cos == doctest::Approx(b.t3_cos).epsilon(1e-15));
    CHECK(a.t1_const == doctest::Approx(b.t1_const).epsilon(1e-15));
}

TEST_CASE("curvature benchmarks: closed form against frozen values") {
    struct Family { ModelSpec spec; const Bench* bench; };
    const Family fams[] = {
        {example1(), kBench1}, {example2(), kBench2}, {example3(), kBench3}};
    for (const auto& fam : fams) {
        const LinearizationData lin = linearize(fam.spec);
        for (int i = 0; i < 3; ++i) {
            const Bench& b = fam.bench[i];
            const BifurcationCoefficients bc =
                bifurcation_coefficients(lin, 1.0, b.R, b.n);
            CHECK(bc.alpha_n == doctest::Approx(b.alpha_n).epsilon(1e-12));
            CHECK(bc.alpha_dd0 == doctest::Approx(b.curv).epsilon(1e-9));
        }
    }
}

TEST_CASE("closed form agrees with the quadrature projection") {
    const LinearizationData lin = linearize(example1());
    for (auto [R, n] : std::vector<std::pair<double, int>>{
             {0.12, 3}, {0.3, 2}, {2.0, 1}, {0.55, 1}, {0.18, 2}}) {
        const double an = alpha_threshold(lin, 1.0, R, n, true);
        const ThetaCoefficients th = theta_coefficients(lin, 1.0, R, n, an);
        const double closed = alpha_curvature(lin, 1.0, R, n, an, th);
        const double quad = alpha_curvature_quadrature(lin, 1.0, R, n, an, th);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
    }
}

TEST_CASE("branch direction and stability classification") {
    const LinearizationData lin1 = linearize(example1());
    const LinearizationData lin2 = linearize(example2());

    // attractive coupling (w_u > 0): negative curvature = backward + stable
    auto [dQ, sQ] = classify(lin1, -0.4844692930449267);
    CHECK(dQ == Direction::Backward);
    CHECK(sQ == BranchStability::Stable);

    auto [dP, sP] = classify(lin1, 1.9741742398437689);
    CHECK(dP == Direction::Forward);
    CHECK(sP == BranchStability::Unstable);

    // repulsive coupling (w_u < 0): positive curvature = forward + stable
    auto [d2, s2] = classify(lin2, 13.785220394343351);
    CHECK(d2 == Direction::Forward);
    CHECK(s2 == BranchStability::Stable);

    auto [d2b, s2b] = classify(lin2, -3.0);
    CHECK(d2b == Direction::Backward);
    CHECK(s2b == BranchStability::Unstable);

    CHECK_THROWS_AS(classify(lin1, 0.0), DegenerateCurvature);
}

TEST_CASE("predicted branch amplitude and side checks") {
    const double an = -3.0242105263157896;
    const double curv = -0.4844692930449267;

    CHECK(predicted_branch(an, curv, an) == doctest::Approx(0.0));
    // backward branch lives at more-negative alpha
    const double s = predicted_branch(an, curv, an - 0.01);
    CHECK(s == doctest::Approx(std::sqrt(2.0 * 0.01 / 0.4844692930449267))
                   .epsilon(1e-12));
    CHECK_THROWS_AS(predicted_branch(an, curv, an + 0.01), WrongSide);

    // forward branch (P): no solution on the more-negative side
    const double anP = -17.789473684210527, curvP = 1.9741742398437689;
    CHECK_THROWS_AS(predicted_branch(anP, curvP, anP - 0.05), WrongSide);
    CHECK(predicted_branch(anP, curvP, anP + 0.05) > 0.0);
}

TEST_CASE("full coefficient bundle is self-consistent") {
    const LinearizationData lin = linearize(example1());
    const BifurcationCoefficients bc = bifurcation_coefficients(lin, 1.0, 0.3, 2);
    CHECK(bc.n == 2);
    CHECK(bc.alpha_n ==
          doctest::Approx(alpha_threshold(lin, 1.0, 0.3, 2, true)).epsilon(1e-14));
    CHECK(bc.direction == Direction::Backward);
    CHECK(bc.branch_stability == BranchStability::Stable);
    CHECK(bc.eig.M1 == doctest::Approx(-lin.w_u / lin.w_k).epsilon(1e-14));
}

TEST_CASE("degenerate growth is rejected") {
    ModelSpec spec = example1();
    spec.growth = GrowthModel::no_growth();
    spec.u_star_override = 1.0;
    const LinearizationData lin = linearize(spec);
    CHECK(lin.f_u == doctest::Approx(0.0));
    CHECK_THROWS_AS(theta_coefficients(lin, 1.0, 0.3, 2, -3.0), GrowthDegenerate);
    CHECK_THROWS_AS(bifurcation_coefficients(lin, 1.0, 0.3, 2), GrowthDegenerate);
}

TEST_CASE("general cubic form reduces correctly when k-partials vanish") {
    // For this model family w_kk = w_ukk = w_kkk = 0, so the assembled cubic
    // coefficient must equal the two-term reduction.
    for (const ModelSpec& spec : {example1(), example2(), example3()}) {
        const LinearizationData lin = linearize(spec);
        const EigenCoefficients ec = eigen_coefficients(lin, 1.0, 0.3, 2);
        const double general = lin.w_uuu + 3 * ec.M1 * lin.w_uuk +
                               3 * ec.M1 * ec.M1 * lin.w_ukk +
                               ec.M1 * ec.M1 * ec.M1 * lin.w_kkk;
        const double reduced = lin.w_uuu + 3 * ec.M1 * lin.w_uuk;
        CHECK(general == doctest::Approx(reduced).epsilon(1e-15));
        CHECK(lin.w_kk == 0.0);
        CHECK(lin.w_ukk == 0.0);
        CHECK(lin.w_kkk == 0.0);
    }
}
