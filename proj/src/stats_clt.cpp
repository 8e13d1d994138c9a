#include "anneal/stats_clt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "anneal/numerics.hpp"

namespace anneal {

namespace {

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance_of(std::span<const double> x, double mean) {
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(x.size() - 1);
}

}  // namespace

double integrated_autocorr_time(std::span<const double> x) {
    const size_t n = x.size();
    if (n < 4) return 1.0;
    const double mu = mean_of(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mu) * (v - mu);
    c0 /= static_cast<double>(n);
    if (c0 == 0.0) return 1.0;
    auto rho = [&](size_t k) {
        double acc = 0.0;
        for (size_t i = 0; i + k < n; ++i) acc += (x[i] - mu) * (x[i + k] - mu);
        return acc / (static_cast<double>(n) * c0);
    };
    // Geyer: sum pair sums Gamma_k = rho(2k) + rho(2k+1) while positive
    double tau = 1.0;
    for (size_t k = 1; 2 * k + 1 < n / 2; ++k) {
        const double gamma = rho(2 * k - 1) + rho(2 * k);
        if (gamma <= 0.0) break;
        tau += 2.0 * gamma;
    }
    return std::max(tau, 1.0);
}

double effective_sample_size(std::span<const double> x) {
    return static_cast<double>(x.size()) / integrated_autocorr_time(x);
}

VarianceEstimate estimate_moments(const SampleBatch& batch) {
    const auto& s = batch.s_values;
    const size_t n = s.size();
    if (n < 40) throw std::runtime_error("estimate_moments: need at least 40 samples");
    const double ess = effective_sample_size(s);
    if (ess < 100.0)
        throw std::runtime_error("estimate_moments: effective sample size below 100 (" +
                                 std::to_string(ess) + ")");

    size_t batch_len = static_cast<size_t>(std::sqrt(static_cast<double>(n)));
    if (n / batch_len < 20) batch_len = n / 20;
    const size_t k = n / batch_len;
    const size_t used = k * batch_len;

    const double inv_n = 1.0 / static_cast<double>(batch.n);
    const double mean_s = mean_of(std::span<const double>(s.data(), used));
    const double var_s = variance_of(std::span<const double>(s.data(), used), mean_s);

    VarianceEstimate out;
    out.mean_spin = mean_s * inv_n;
    out.var_scaled = var_s * inv_n;
    out.ess = ess;
    out.batches = static_cast<int>(k);

    // batch means for the SE of the mean
    std::vector<double> bmean(k), bsum(k), bsumsq(k);
    for (size_t b = 0; b < k; ++b) {
        double acc = 0.0, acc2 = 0.0;
        for (size_t i = b * batch_len; i < (b + 1) * batch_len; ++i) {
            acc += s[i];
            acc2 += s[i] * s[i];
        }
        bsum[b] = acc;
        bsumsq[b] = acc2;
        bmean[b] = acc / static_cast<double>(batch_len);
    }
    const double bmu = mean_of(bmean);
    double bvar = 0.0;
    for (double v : bmean) bvar += (v - bmu) * (v - bmu);
    bvar /= static_cast<double>(k - 1);
    out.se_mean = std::sqrt(bvar / static_cast<double>(k)) * inv_n;

    // jackknife over batches for the SE of the variance
    const double tot = std::accumulate(bsum.begin(), bsum.end(), 0.0);
    const double tot2 = std::accumulate(bsumsq.begin(), bsumsq.end(), 0.0);
    std::vector<double> theta(k);
    const double m_loo = static_cast<double>(used - batch_len);
    for (size_t b = 0; b < k; ++b) {
        const double t = tot - bsum[b];
        const double t2 = tot2 - bsumsq[b];
        theta[b] = (t2 - t * t / m_loo) / (m_loo - 1.0) * inv_n;
    }
    const double tmu = mean_of(theta);
    double jack = 0.0;
    for (double v : theta) jack += (v - tmu) * (v - tmu);
    out.se_var = std::sqrt(jack * static_cast<double>(k - 1) / static_cast<double>(k));
    return out;
}

CltReport clt_diagnostics(const SampleBatch& batch, double predicted_variance) {
    const auto& s = batch.s_values;
    if (!(predicted_variance > 0.0))
        throw std::invalid_argument("clt_diagnostics: predicted variance must be positive");
    const double ess = effective_sample_size(s);
    if (ess < 500.0)
        throw std::runtime_error("clt_diagnostics: effective sample size below 500");

    const double mu = mean_of(s);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : s) {
        const double d = v - mu;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(s.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;

    CltReport rep;
    rep.ess = ess;
    rep.skewness = m3 / std::pow(m2, 1.5);
    rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    rep.se_skew = std::sqrt(6.0 / ess);
    rep.se_kurt = std::sqrt(24.0 / ess);
    rep.skew_ok = std::abs(rep.skewness) < 4.0 * rep.se_skew;
    rep.kurt_ok = std::abs(rep.excess_kurtosis) < 4.0 * rep.se_kurt;

    const double sd = std::sqrt(static_cast<double>(batch.n) * predicted_variance);
    std::vector<double> z(s.size());
    for (size_t i = 0; i < s.size(); ++i) z[i] = (s[i] - mu) / sd;
    rep.ks_distance = ks_distance_normal(std::move(z));
    return rep;
}

std::vector<SllnRow> slln_scan(const std::function<std::vector<double>(int)>& draws_at,
                               double m_ref, double eps, const std::vector<int>& n_list) {
    std::vector<SllnRow> rows;
    for (int n : n_list) {
        const std::vector<double> draws = draws_at(n);
        long long hits = 0;
        for (double v : draws)
            if (std::abs(v - m_ref) >= eps) ++hits;
        rows.push_back({n, draws.empty() ? 0.0 : static_cast<double>(hits) / draws.size(),
                        static_cast<int>(draws.size())});
    }
    return rows;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double acc = 0.0;
    for (size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

ChiSquareResult chi_square_gof(std::span<const long long> counts, std::span<const double> probs,
                               double min_expected) {
    if (counts.size() != probs.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
    long long total = 0;
    for (long long c : counts) total += c;
    // pool sparse bins left to right
    std::vector<double> obs, exp;
    double o_acc = 0.0, e_acc = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        o_acc += static_cast<double>(counts[i]);
        e_acc += probs[i] * static_cast<double>(total);
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (!exp.empty()) {
            obs.back() += o_acc;
            exp.back() += e_acc;
        } else {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
        }
    }
    ChiSquareResult res;
    res.statistic = 0.0;
    for (size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        res.statistic += d * d / exp[i];
    }
    res.df = static_cast<double>(obs.size() > 1 ? obs.size() - 1 : 1);
    res.p_value = chi_square_sf(res.statistic, res.df);
    return res;
}

double ks_distance_normal(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double n = static_cast<double>(z.size());
    double dmax = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        const double cdf = normal_cdf(z[i]);
        dmax = std::max(dmax, std::abs(cdf - static_cast<double>(i) / n));
        dmax = std::max(dmax, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    return dmax;
}

}  // namespace anneal
