// MCMC targeting the annealed measures: heat-bath Glauber on the effective
// inhomogeneous Curie-Weiss couplings for GRG, and a joint (pairing, spins)
// chain for CM whose spin marginal is exactly the annealed measure.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "anneal/exact_oracles.hpp"
#include "anneal/weights.hpp"

namespace anneal {

struct ChainConfig {
    std::uint64_t seed = 1;
    long long burn_in_sweeps = -1;  // < 0: default (100 sweeps of N updates)
    long long thin_sweeps = 1;      // sweeps between kept samples
    long long samples = 1000;
    bool record_configs = false;    // keep per-sample spin configurations (n <= 20)
};

struct SampleBatch {
    std::vector<double> s_values;  // total spin S_N per kept sample
    std::vector<std::uint32_t> configs;
    double switch_acceptance = std::numeric_limits<double>::quiet_NaN();
    int n = 0;
    std::uint64_t seed = 0;
    long long burn_in_sweeps = 0;
    long long thin_sweeps = 1;
    bool approximate_couplings = false;  // rank-1 fast path was used
};

// heat-bath single-spin chain for the Boltzmann-Gibbs law on a fixed graph
SampleBatch glauber_quenched(const MultiGraph& g, double beta, double B,
                             const ChainConfig& config);

// heat-bath chain with local field h_i = B + sum_j beta_ij sigma_j. Exact
// dense couplings up to dense_cap vertices; beyond that the rank-1
// approximation sinh(beta) w_i w_j / ell_N is used and flagged in the batch.
SampleBatch glauber_annealed_grg(const WeightSequence& w, double beta, double B,
                                 const ChainConfig& config, int dense_cap = 4000);

// alternates spin heat-bath sweeps with double-edge switch moves on the
// pairing (accepted with min(1, e^{beta Delta})); reversible for the joint
// law, so the spin marginal targets the annealed CM measure
SampleBatch joint_mcmc_cm(const DegreeSequence& d, double beta, double B,
                          const ChainConfig& config);

}  // namespace anneal
