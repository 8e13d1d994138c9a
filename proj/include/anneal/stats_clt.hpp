// Statistical verification layer: batch-means moment estimation with error
// bars, CLT normality diagnostics, SLLN concentration scans, and the small
// hypothesis-test helpers the oracle comparisons need.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "anneal/samplers.hpp"

namespace anneal {

struct VarianceEstimate {
    double mean_spin;   // mean of S_N / N
    double var_scaled;  // Var(S_N) / N, the variance of S_N / sqrt(N)
    double se_mean;     // batch-means SE of mean_spin
    double se_var;      // jackknife-over-batches SE of var_scaled
    double ess;
    int batches;
};

// batch means with sqrt(n) batch length (>= 20 batches enforced);
// throws if the effective sample size is below 100
VarianceEstimate estimate_moments(const SampleBatch& batch);

// integrated autocorrelation time via Geyer's initial positive sequence
double integrated_autocorr_time(std::span<const double> x);
double effective_sample_size(std::span<const double> x);

struct CltReport {
    double skewness;
    double excess_kurtosis;
    double se_skew;  // sqrt(6 / ESS)
    double se_kurt;  // sqrt(24 / ESS)
    bool skew_ok;    // |skewness| < 4 se_skew
    bool kurt_ok;
    double ks_distance;  // to the standard normal, after standardization
    double ess;
};

// standardizes S_N by sqrt(N * predicted_variance) around the sample mean;
// requires ESS >= 500
CltReport clt_diagnostics(const SampleBatch& batch, double predicted_variance);

struct SllnRow {
    int n;
    double frequency;  // empirical P(|S_N/N - M| >= eps)
    int draws;
};

// draws_at(n) must return independent-ish draws of S_N / N
std::vector<SllnRow> slln_scan(const std::function<std::vector<double>(int)>& draws_at,
                               double m_ref, double eps, const std::vector<int>& n_list);

// (1/2) sum |p_i - q_i|
double total_variation(std::span<const double> p, std::span<const double> q);

struct ChiSquareResult {
    double statistic;
    double df;
    double p_value;
};

// goodness of fit of observed counts against probs; bins with expected count
// below min_expected are pooled into their right neighbor
ChiSquareResult chi_square_gof(std::span<const long long> counts, std::span<const double> probs,
                               double min_expected = 5.0);

// Kolmogorov distance between the empirical law of z and the standard normal
double ks_distance_normal(std::vector<double> z);

}  // namespace anneal
