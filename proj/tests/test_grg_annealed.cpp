#include <doctest.h>

#include <cmath>

#include "anneal/exact_oracles.hpp"
#include "anneal/graph_models.hpp"
#include "anneal/grg_annealed.hpp"
#include "anneal/numerics.hpp"
#include "anneal/rng.hpp"

using namespace anneal;

TEST_CASE("effective couplings") {
    const double beta = 0.7;
    // p = 1 collapses to beta_ij = beta; beta = 0 gives zero couplings
    CHECK(pair_coupling(1.0, beta).first == doctest::Approx(beta).epsilon(1e-15));
    CHECK(pair_coupling(0.3, 0.0).first == 0.0);
    CHECK(pair_coupling(0.3, 0.0).second == 0.0);

    const auto w = WeightSequence::constant(4, 1.0);
    const EffectiveCouplings cpl(w, beta);
    double sum_b = 0.0, sum_p = 0.0, max_p = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double p = grg_edge_prob(w, i, j);
            CHECK(cpl.coupling(i, j) == cpl.coupling(j, i));
            CHECK(cpl.coupling(i, j) > 0.0);
            CHECK(cpl.coupling(i, j) < beta);
            sum_b += cpl.coupling(i, j);
            sum_p += p;
            max_p = std::max(max_p, p);
        }
    // beta_ij ~ sinh(beta) p_ij with relative error O(p)
    CHECK(std::abs(sum_b - std::sinh(beta) * sum_p) / (std::sinh(beta) * sum_p) < max_p);

    const EffectiveCouplings zero(w, 0.0);
    CHECK(zero.log_g2() == 0.0);
    CHECK(zero.coupling(0, 3) == 0.0);
    CHECK(log_g2(w, beta) == doctest::Approx(cpl.log_g2()).epsilon(1e-13));
}

TEST_CASE("cw objective") {
    const auto w = WeightSequence::constant(16, 1.7);
    AnnealedGrgModel m{w, 0.0, 0.4};
    CHECK(cw_objective(m, 0.0) == doctest::Approx(std::log(std::cosh(0.4))).epsilon(1e-15));
    CHECK(cw_objective(m, 1.2) ==
          doctest::Approx(std::log(std::cosh(0.4)) - 0.5 * 1.2 * 1.2).epsilon(1e-14));

    // constant weights reduce to the classical Curie-Weiss objective at
    // beta' = sinh(beta) w
    AnnealedGrgModel m2{w, 0.6, 0.1};
    const double beta_prime = std::sinh(0.6) * 1.7;
    for (double z : {0.2, 0.9, 1.7})
        CHECK(cw_objective(m2, z) ==
              doctest::Approx(std::log(std::cosh(std::sqrt(beta_prime) * z + 0.1)) -
                              0.5 * z * z)
                  .epsilon(1e-13));
}

TEST_CASE("fixed point: branches and the grid-argmax oracle") {
    const auto w2 = WeightSequence::constant(8, 2.0);
    {
        // B = 0 subcritical: sinh(0.2) * 2 < 1
        const auto fp = solve_fixed_point(AnnealedGrgModel{w2, 0.2, 0.0});
        CHECK(fp.z_star == 0.0);
        CHECK(fp.branch == FixedPointBranch::symmetric_zero);
    }
    {
        // beta = 0: the map is identically zero
        const auto fp = solve_fixed_point(AnnealedGrgModel{w2, 0.0, 0.2});
        CHECK(fp.z_star == 0.0);
        CHECK(fp.branch == FixedPointBranch::symmetric_zero);
    }
    {
        AnnealedGrgModel m{w2, 0.6, 0.1};
        const auto fp = solve_fixed_point(m);
        CHECK(fp.residual <= 1e-12);
        CHECK(fp.branch == FixedPointBranch::positive);
        // zoom grid search of the objective
        double lo = 0.0, hi = 3.0;
        for (int pass = 0; pass < 6; ++pass) {
            double best_z = lo, best_v = -1e300;
            const double step = (hi - lo) / 400.0;
            for (int k = 0; k <= 400; ++k) {
                const double z = lo + k * step;
                const double v = cw_objective(m, z);
                if (v > best_v) {
                    best_v = v;
                    best_z = z;
                }
            }
            lo = std::max(best_z - 2.0 * step, 0.0);
            hi = best_z + 2.0 * step;
        }
        CHECK(std::abs(fp.z_star - 0.5 * (lo + hi)) < 1e-6);
    }
    {
        // negative field mirrors the positive branch
        const auto fp_pos = solve_fixed_point(AnnealedGrgModel{w2, 0.6, 0.25});
        const auto fp_neg = solve_fixed_point(AnnealedGrgModel{w2, 0.6, -0.25});
        CHECK(fp_neg.branch == FixedPointBranch::negative);
        CHECK(fp_neg.z_star == doctest::Approx(-fp_pos.z_star).epsilon(1e-12));
    }
    {
        // B = 0 supercritical returns the positive root
        const auto fp = solve_fixed_point(AnnealedGrgModel{w2, 0.9, 0.0});
        CHECK(fp.z_star > 0.1);
        CHECK(fp.residual <= 1e-12);
    }
}

TEST_CASE("fixed-point map is nondecreasing and concave on z >= 0") {
    Rng rng = seeded_rng(31);
    for (int rep = 0; rep < 4; ++rep) {
        const auto w = rep % 2 == 0 ? WeightSequence::constant(12, 1.0 + uniform01(rng))
                                    : WeightSequence::powerlaw(12, 4.5, 0.8);
        AnnealedGrgModel m{w, 0.2 + uniform01(rng), 0.5 * uniform01(rng)};
        double prev = -1e300, prev_diff = 1e300;
        for (int k = 0; k <= 60; ++k) {
            const double h = fixed_point_map(m, k * 0.05);
            if (k > 0) {
                CHECK(h >= prev - 1e-12);            // monotone
                CHECK(h - prev <= prev_diff + 1e-9);  // concave increments
                prev_diff = h - prev;
            }
            prev = h;
        }
    }
}

TEST_CASE("argmax consistency across random models") {
    Rng rng = seeded_rng(77);
    for (int rep = 0; rep < 20; ++rep) {
        const auto w = rep % 2 == 0
                           ? WeightSequence::constant(10, 0.5 + 2.0 * uniform01(rng))
                           : WeightSequence::powerlaw(10, 3.5 + 3.0 * uniform01(rng), 0.7);
        AnnealedGrgModel m{w, 1.2 * uniform01(rng), 0.8 * (uniform01(rng) - 0.5)};
        const auto fp = solve_fixed_point(m);
        const double span = 3.0;
        const double step = span / 1000.0;
        double best_z = -span, best_v = -1e300;
        for (int k = 0; k <= 2000; ++k) {
            const double z = -span + k * step;
            const double v = cw_objective(m, z);
            if (v > best_v) {
                best_v = v;
                best_z = z;
            }
        }
        CHECK(std::abs(fp.z_star - best_z) <= step + 1e-9);
    }
}

TEST_CASE("pressure: beta = 0 identity and the N = 16 enumeration oracle") {
    const auto w0 = WeightSequence::constant(10, 1.4);
    CHECK(annealed_pressure(AnnealedGrgModel{w0, 0.0, 0.6}) ==
          doctest::Approx(std::log(2.0 * std::cosh(0.6))).epsilon(1e-12));

    const auto w = WeightSequence::constant(16, 1.0);
    const double psi = annealed_pressure(AnnealedGrgModel{w, 0.4, 0.3});
    const double exact = exact_annealed_Z_grg(w, 0.4, 0.3).log() / 16.0;
    CHECK(std::abs(psi - exact) < 2e-2);  // documented finite-size gap

    // monotone nondecreasing in B >= 0
    double prev = -1e300;
    for (double b = 0.0; b <= 1.0; b += 0.125) {
        const double v = annealed_pressure(AnnealedGrgModel{w0, 0.5, b});
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
}

TEST_CASE("magnetization: identities, derivative oracle, GHS monotonicity") {
    const auto w2 = WeightSequence::constant(12, 2.0);
    CHECK(annealed_magnetization(AnnealedGrgModel{w2, 0.3, 0.0}).value == 0.0);
    CHECK(annealed_magnetization(AnnealedGrgModel{w2, 0.0, 0.7}).value ==
          doctest::Approx(std::tanh(0.7)).epsilon(1e-14));

    // M equals the central difference of the pressure in B (alpha drops out)
    AnnealedGrgModel m{w2, 0.5, 0.2};
    const double h = 1e-4;
    const double alpha = alpha_n(w2, 0.5);
    const double fd = (annealed_pressure_given_alpha(AnnealedGrgModel{w2, 0.5, 0.2 + h}, alpha) -
                       annealed_pressure_given_alpha(AnnealedGrgModel{w2, 0.5, 0.2 - h}, alpha)) /
                      (2.0 * h);
    CHECK(std::abs(annealed_magnetization(m).value - fd) < 1e-6);

    // dM/dB >= 0 along a grid; non-uniqueness flagged past criticality at B = 0
    double prev = -1e300;
    for (double b = -0.5; b <= 0.5; b += 0.1) {
        const double v = annealed_magnetization(AnnealedGrgModel{w2, 0.6, b}).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    const auto super = annealed_magnetization(AnnealedGrgModel{w2, 0.9, 0.0});
    CHECK(!super.unique);
    CHECK(super.value > 0.1);  // B -> 0+ branch
    CHECK(annealed_magnetization(AnnealedGrgModel{w2, 0.3, 0.0}).unique);
}

TEST_CASE("susceptibility identities and conditioning flag") {
    const auto w = WeightSequence::constant(10, 2.0);
    CHECK(std::abs(annealed_susceptibility(AnnealedGrgModel{w, 0.0, 0.4}).value -
                   1.0 / std::pow(std::cosh(0.4), 2)) < 1e-10);
    CHECK(std::abs(annealed_susceptibility(AnnealedGrgModel{w, 0.0, 0.0}).value - 1.0) < 1e-10);
    // |sinh(beta) nu - 1| < 1e-3 at B = 0: asinh(0.5) hits it exactly
    CHECK(annealed_susceptibility(AnnealedGrgModel{w, std::asinh(0.5), 0.0}).ill_conditioned);
    CHECK(!annealed_susceptibility(AnnealedGrgModel{w, 0.2, 0.0}).ill_conditioned);
}

TEST_CASE("critical betas and the uniqueness regime") {
    const auto c1 = critical_betas(1.0);
    CHECK(c1.annealed == doctest::Approx(std::log(1.0 + std::sqrt(2.0))).epsilon(1e-15));
    CHECK(std::isinf(c1.quenched));
    const auto c2 = critical_betas(2.0);
    CHECK(c2.annealed == doctest::Approx(0.481211825059603).epsilon(1e-12));
    CHECK(c2.quenched == doctest::Approx(0.549306144334055).epsilon(1e-12));
    CHECK(critical_betas(1e8).annealed < 1e-7);
    CHECK(critical_betas(1e8).quenched < 1e-7);

    CHECK(uniqueness_check(0.1, 0.0, 2.0));
    CHECK(!uniqueness_check(1.0, 0.0, 2.0));
    CHECK(uniqueness_check(5.0, 0.01, 2.0));
    CHECK(!uniqueness_check(0.0, 0.0, 2.0));
}

TEST_CASE("bifurcation: magnetization jump around asinh(1/2) at tiny field") {
    const auto w = WeightSequence::constant(1, 2.0);  // the limiting constant-weight law
    const double beta_c = std::asinh(0.5);
    for (double beta = 0.1; beta <= beta_c - 0.05; beta += 0.05)
        CHECK(std::abs(annealed_magnetization(AnnealedGrgModel{w, beta, 1e-4}).value) < 0.05);
    for (double beta = beta_c + 0.1; beta <= beta_c + 0.5; beta += 0.1)
        CHECK(std::abs(annealed_magnetization(AnnealedGrgModel{w, beta, 1e-4}).value) > 0.2);
}
