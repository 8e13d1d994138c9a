// Ground-truth computations at desk scale: 2^N spin enumeration, perfect
// matching enumeration, the exact GRG annealed partition function by edge
// independence, and 1-D transfer matrices. Everything lives in the log domain.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "anneal/log_value.hpp"
#include "anneal/weights.hpp"

namespace anneal {

// default enumeration caps; callers can override per call
inline constexpr int kMaxSpinEnum = 24;   // 2^N spin configurations
inline constexpr int kMaxStubEnum = 14;   // (ell-1)!! pairings

struct MultiGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // self-loops and repeats allowed
};

// log Z = log sum_sigma exp(beta * sum_edges sigma_i sigma_j + B * sum_i sigma_i).
// Multi-edges multiply couplings; a self-loop contributes a factor e^beta.
LogValue exact_quenched_Z(const MultiGraph& g, double beta, double B, int cap = kMaxSpinEnum);

// per-configuration log weights (index bit i set <=> sigma_i = +1)
std::vector<double> quenched_logweights(const MultiGraph& g, double beta, double B,
                                        int cap = 20);

// Q_N(Z_N) = sum_sigma e^{B sum sigma} prod_{i<j} (e^{beta sigma_i sigma_j} p_ij + 1 - p_ij),
// exact by edge independence
LogValue exact_annealed_Z_grg(const WeightSequence& w, double beta, double B,
                              int cap = kMaxSpinEnum);
std::vector<double> annealed_logweights_grg(const WeightSequence& w, double beta, double B,
                                            int cap = 20);

// average of exact_quenched_Z over all (ell-1)!! perfect matchings
LogValue exact_annealed_Z_cm(const DegreeSequence& d, double beta, double B,
                             int cap = kMaxStubEnum);
// annealed spin marginal on {-1,+1}^N, normalized
std::vector<double> annealed_spin_probs_cm(const DegreeSequence& d, double beta, double B,
                                           int cap = kMaxStubEnum);

// Z = lambda_+^n + lambda_-^n (periodic boundary), n >= 1
LogValue transfer_matrix_cycle_Z(int n, double beta, double B);
// Z = A_+ lambda_+^n + A_- lambda_-^n (free boundary), n >= 2
LogValue transfer_matrix_line_Z(int n, double beta, double B);

// enumerate every perfect matching of `stubs` half-edges; visit receives
// mate[s] for each stub. Returns the number of matchings visited.
long long enumerate_pairings(int stubs, const std::function<void(const std::vector<int>&)>& visit);

// log-sum-exp of f(config) over all 2^n configurations. The OMP variant
// shards the range into max_threads() contiguous chunks merged in order;
// the serial variant is the single-chunk reference kept for testing.
double spin_logsumexp_serial(int n, const std::function<double(std::uint32_t)>& log_weight);
double spin_logsumexp_omp(int n, const std::function<double(std::uint32_t)>& log_weight);

}  // namespace anneal
