#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "memopat/model.hpp"

using namespace memopat;

namespace {

ModelSpec base_spec() {
    ModelSpec spec;
    spec.growth = GrowthModel::logistic(1.0, 1.0);
    spec.encoding = EncodingFamily{};
    return spec;
}

} // namespace

TEST_CASE("constant state: logistic carrying capacity wins") {
    ModelSpec spec = base_spec();
    CHECK(constant_state_density(spec) == doctest::Approx(1.0).epsilon(1e-15));
    spec.growth = GrowthModel::logistic(0.7, 2.5);
    CHECK(constant_state_density(spec) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("constant state: no growth needs an explicit density") {
    ModelSpec spec = base_spec();
    spec.growth = GrowthModel::no_growth();
    CHECK_THROWS_AS(constant_state_density(spec), NoConstantState);
    spec.u_star_override = 0.8;
    CHECK(constant_state_density(spec) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("linearization: quadratic-ratio encoding at the benchmark point") {
    const ModelSpec spec = base_spec();
    const LinearizationData lin = linearize(spec);

    CHECK(lin.u_star == doctest::Approx(1.0).epsilon(1e-15));
    // g1(1)/g2(1) = (1/2)/0.65 = 10/13
    CHECK(lin.k_star == doctest::Approx(10.0 / 13.0).epsilon(1e-14));
    CHECK(lin.v_star == doctest::Approx(10.0 / 13.0).epsilon(1e-14));

    CHECK(lin.f_u == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(lin.f_uu == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(lin.f_uuu == doctest::Approx(0.0));

    // w(u,k) = g1(u) - g2(u) k with g1 = u^2/(1+u), g2 = 0.15 + 0.5 u:
    // w_u = g1'(1) - g2'(1) k* = 3/4 - 0.5 * 10/13 = 19/52.
    CHECK(lin.w_u == doctest::Approx(19.0 / 52.0).epsilon(1e-14));
    CHECK(lin.w_k == doctest::Approx(-0.65).epsilon(1e-14));
    CHECK(lin.w_uu == doctest::Approx(0.25).epsilon(1e-13));      // g1'' = 1/4
    CHECK(lin.w_uk == doctest::Approx(-0.5).epsilon(1e-14));      // -g2'
    CHECK(lin.w_kk == doctest::Approx(0.0));
    CHECK(lin.w_uuu == doctest::Approx(-3.0 / 8.0).epsilon(1e-13)); // g1'''
    CHECK(lin.w_uuk == doctest::Approx(0.0));                       // -g2''
    CHECK(lin.w_ukk == doctest::Approx(0.0));
    CHECK(lin.w_kkk == doctest::Approx(0.0));
}

TEST_CASE("linearization: linear-ratio encoding flips the coupling sign") {
    ModelSpec spec = base_spec();
    spec.encoding.g1_kind = EncodingFamily::G1::RatioLinear;
    const LinearizationData lin = linearize(spec);

    // g1 = u/(1+u): g1'(1) = 1/4, so w_u = 1/4 - 0.5*10/13 = -7/52.
    CHECK(lin.w_u == doctest::Approx(-7.0 / 52.0).epsilon(1e-13));
    CHECK(lin.w_k == doctest::Approx(-0.65).epsilon(1e-14));
    CHECK(lin.w_uu == doctest::Approx(-0.25).epsilon(1e-13)); // g1'' = -1/4
    CHECK(lin.w_uuu == doctest::Approx(3.0 / 8.0).epsilon(1e-13));
    CHECK(lin.w_u < 0.0);
}

TEST_CASE("linearization: coupling sign tracks mu vs beta for linear ratio") {
    // w_u = 1/(1+u*)^2 - beta k* ; at u* = 1, k* = g1/g2:
    // sign(w_u) = sign(mu - beta) for the linear-ratio encoding.
    for (double mu : {0.1, 0.4, 0.8}) {
        for (double beta : {0.2, 0.5, 0.9}) {
            ModelSpec spec = base_spec();
            spec.encoding.g1_kind = EncodingFamily::G1::RatioLinear;
            spec.encoding.mu = mu;
            spec.encoding.beta = beta;
            const LinearizationData lin = linearize(spec);
            if (mu > beta)
                CHECK(lin.w_u > 0.0);
            else if (mu < beta)
                CHECK(lin.w_u < 0.0);
            else
                CHECK(lin.w_u == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("linearization: quadratic ratio keeps positive coupling") {
    // w_u = g1' - beta k* = rho/(1+u*)^2 * (2 + u*) ... stays positive for any
    // positive mu, beta: g1'/g1 = (2+u)/(u(1+u)) > beta/g2 ... verified on a grid.
    for (double mu : {0.05, 0.15, 0.6, 1.2}) {
        for (double beta : {0.1, 0.5, 1.0, 2.0}) {
            ModelSpec spec = base_spec();
            spec.encoding.mu = mu;
            spec.encoding.beta = beta;
            const LinearizationData lin = linearize(spec);
            CHECK(lin.w_u > 0.0);
        }
    }
}

TEST_CASE("perturbed decay: smooth-step derivatives enter w at the benchmark") {
    ModelSpec spec = base_spec();
    spec.encoding.perturbed = true; // defaults eps = 0.05, gamma = 10
    const LinearizationData lin = linearize(spec);
    const ModelSpec plain = base_spec();
    const LinearizationData lin0 = linearize(plain);

    const double eps = 0.05, gamma = 10.0, kstar = 10.0 / 13.0;
    const double pi = 3.14159265358979323846;
    // step(u*) = eps/2, step'(u*) = eps*gamma/pi, step''(u*) = 0,
    // step'''(u*) = -2 eps gamma^3 / pi.
    CHECK(lin.k_star ==
          doctest::Approx(0.5 / (0.65 + eps / 2)).epsilon(1e-13));
    CHECK(lin.w_k == doctest::Approx(-(0.65 + eps / 2)).epsilon(1e-14));
    // w_u changes both through k* and the new g2' term.
    const double ks_pert = 0.5 / (0.65 + eps / 2);
    CHECK(lin.w_u ==
          doctest::Approx(0.75 - (0.5 + eps * gamma / pi) * ks_pert).epsilon(1e-12));
    CHECK(lin.w_uuk == doctest::Approx(0.0).epsilon(1e-13)); // -g2'' = -step'' = 0
    (void)lin0;
    (void)kstar;
}

TEST_CASE("derivative orders agree with centered differences") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u_dist(0.3, 2.5);
    std::uniform_real_distribution<double> par(0.1, 1.5);

    for (int trial = 0; trial < 40; ++trial) {
        ModelSpec spec = base_spec();
        spec.growth = GrowthModel::logistic(par(rng), par(rng) + 0.5);
        spec.encoding.rho = par(rng);
        spec.encoding.mu = par(rng);
        spec.encoding.beta = par(rng);
        spec.encoding.g1_kind = (trial % 2 == 0)
                                    ? EncodingFamily::G1::RatioQuadratic
                                    : EncodingFamily::G1::RatioLinear;
        const DerivativeCheck chk = finite_difference_check(spec, u_dist(rng));
        CHECK(chk.max_rel_error < 1e-6);
    }
}

TEST_CASE("derivative orders: perturbed decay with sharp transition") {
    ModelSpec spec = base_spec();
    spec.encoding.perturbed = true;
    spec.encoding.gamma = 50.0;
    // Differencing across the arctan shoulder needs a smaller step.
    const DerivativeCheck chk = finite_difference_check(spec, 1.07, 1e-5);
    CHECK(chk.max_rel_error < 1e-4);
}

TEST_CASE("eval_f matches the logistic closed form") {
    ModelSpec spec = base_spec();
    spec.growth = GrowthModel::logistic(1.3, 2.0);
    const double u = 1.7;
    CHECK(eval_f(spec, u, 0) ==
          doctest::Approx(1.3 * u * (1.0 - u / 2.0)).epsilon(1e-15));
    CHECK(eval_f(spec, u, 1) ==
          doctest::Approx(1.3 * (1.0 - u)).epsilon(1e-14));
    CHECK(eval_f(spec, u, 2) == doctest::Approx(-1.3).epsilon(1e-15));
    CHECK(eval_f(spec, u, 3) == doctest::Approx(0.0));

    spec.growth = GrowthModel::no_growth();
    CHECK(eval_f(spec, u, 0) == doctest::Approx(0.0));
    CHECK(eval_f(spec, u, 1) == doctest::Approx(0.0));
}
