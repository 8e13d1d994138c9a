#include <doctest.h>

#include <cmath>

#include "anneal/exact_oracles.hpp"
#include "anneal/graph_models.hpp"
#include "anneal/numerics.hpp"
#include "anneal/samplers.hpp"
#include "anneal/stats_clt.hpp"

using namespace anneal;

namespace {

std::vector<double> empirical_law(const SampleBatch& batch, size_t states) {
    std::vector<double> emp(states, 0.0);
    for (auto c : batch.configs) emp[c] += 1.0 / static_cast<double>(batch.configs.size());
    return emp;
}

}  // namespace

TEST_CASE("quenched Glauber: free spins, determinism, triangle law") {
    {
        // beta = 0: i.i.d. spins with mean tanh(B)
        const MultiGraph g{40, {}};
        ChainConfig cfg;
        cfg.seed = 5;
        cfg.samples = 4000;
        cfg.burn_in_sweeps = 50;
        const auto batch = glauber_quenched(g, 0.0, 0.4, cfg);
        double acc = 0.0;
        for (double s : batch.s_values) acc += s / 40.0;
        const double mean = acc / static_cast<double>(batch.s_values.size());
        // independent samples: SE of the mean of S/N
        const double se = std::sqrt((1.0 - std::pow(std::tanh(0.4), 2)) /
                                    (40.0 * batch.s_values.size()));
        CHECK(std::abs(mean - std::tanh(0.4)) < 3.0 * se);
    }
    {
        // deterministic replay under a fixed seed
        const MultiGraph g{6, {{0, 1}, {1, 2}, {3, 4}}};
        ChainConfig cfg;
        cfg.seed = 77;
        cfg.samples = 100;
        const auto a = glauber_quenched(g, 0.4, 0.1, cfg);
        const auto b = glauber_quenched(g, 0.4, 0.1, cfg);
        CHECK(a.s_values == b.s_values);
    }
    {
        // triangle at (0.5, 0.2): empirical configuration law vs enumeration
        const MultiGraph tri{3, {{0, 1}, {1, 2}, {2, 0}}};
        ChainConfig cfg;
        cfg.seed = 1;
        cfg.samples = 1000000;
        cfg.burn_in_sweeps = 100;
        cfg.record_configs = true;
        const auto batch = glauber_quenched(tri, 0.5, 0.2, cfg);
        const auto lw = quenched_logweights(tri, 0.5, 0.2);
        const double lz = log_sum_exp(lw);
        std::vector<double> target(lw.size());
        for (size_t c = 0; c < lw.size(); ++c) target[c] = std::exp(lw[c] - lz);
        CHECK(total_variation(empirical_law(batch, 8), target) < 0.01);
    }
}

TEST_CASE("annealed GRG Glauber: enumeration law, saturation, fast path flag") {
    {
        const auto w = WeightSequence::constant(10, 1.0);
        ChainConfig cfg;
        cfg.seed = 3;
        cfg.samples = 1000000;
        cfg.burn_in_sweeps = 200;
        cfg.record_configs = true;
        const auto batch = glauber_annealed_grg(w, 0.5, 0.2, cfg);
        CHECK(!batch.approximate_couplings);
        const auto lw = annealed_logweights_grg(w, 0.5, 0.2);
        const double lz = log_sum_exp(lw);
        std::vector<double> target(lw.size());
        for (size_t c = 0; c < lw.size(); ++c) target[c] = std::exp(lw[c] - lz);
        CHECK(total_variation(empirical_law(batch, 1024), target) < 0.02);
    }
    {
        // strong field saturates the magnetization
        const auto w = WeightSequence::constant(60, 1.0);
        ChainConfig cfg;
        cfg.seed = 9;
        cfg.samples = 500;
        const auto batch = glauber_annealed_grg(w, 0.2, 3.0, cfg);
        double acc = 0.0;
        for (double s : batch.s_values) acc += s / 60.0;
        CHECK(acc / static_cast<double>(batch.s_values.size()) > 0.99);
    }
    {
        // above the dense cap the rank-1 approximation is flagged
        const auto w = WeightSequence::constant(32, 1.0);
        ChainConfig cfg;
        cfg.seed = 4;
        cfg.samples = 50;
        CHECK(glauber_annealed_grg(w, 0.3, 0.1, cfg, 16).approximate_couplings);
        CHECK(!glauber_annealed_grg(w, 0.3, 0.1, cfg).approximate_couplings);
    }
}

TEST_CASE("joint CM chain: marginal law, beta = 0 acceptance, seed averaging") {
    const DegreeSequence d(std::vector<int>{1, 1, 2});
    {
        // pooled over 3 seeds per the detailed-balance smoke contract
        const auto target = annealed_spin_probs_cm(d, 0.6, 0.25);
        std::vector<double> emp(target.size(), 0.0);
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            ChainConfig cfg;
            cfg.seed = seed;
            cfg.samples = 120000;
            cfg.burn_in_sweeps = 100;
            cfg.record_configs = true;
            const auto batch = joint_mcmc_cm(d, 0.6, 0.25, cfg);
            for (auto c : batch.configs)
                emp[c] += 1.0 / (3.0 * static_cast<double>(batch.configs.size()));
        }
        CHECK(total_variation(emp, target) < 0.02);
    }
    {
        // beta = 0: switch moves always accepted, spins i.i.d. tanh(B)
        const DegreeSequence big(std::vector<int>(100, 2));
        ChainConfig cfg;
        cfg.seed = 6;
        cfg.samples = 3000;
        cfg.burn_in_sweeps = 50;
        const auto batch = joint_mcmc_cm(big, 0.0, 0.3, cfg);
        CHECK(batch.switch_acceptance == 1.0);
        double acc = 0.0;
        for (double s : batch.s_values) acc += s / 100.0;
        const double mean = acc / static_cast<double>(batch.s_values.size());
        const double se = std::sqrt((1.0 - std::pow(std::tanh(0.3), 2)) /
                                    (100.0 * batch.s_values.size()));
        CHECK(std::abs(mean - std::tanh(0.3)) < 3.0 * se);
    }
    {
        // beta > 0 rejects some switches yet stays within (0, 1]
        const DegreeSequence big(std::vector<int>(60, 2));
        ChainConfig cfg;
        cfg.seed = 8;
        cfg.samples = 500;
        const auto batch = joint_mcmc_cm(big, 0.8, 0.1, cfg);
        CHECK(batch.switch_acceptance > 0.0);
        CHECK(batch.switch_acceptance < 1.0);
    }
}
