#include "anneal/exact_oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "anneal/numerics.hpp"
#include "anneal/parallel.hpp"
#include "anneal/transfer.hpp"

namespace anneal {

// defined in graph_models.cpp; redeclared here to avoid a header cycle
double grg_edge_prob_raw(const WeightSequence& w, int i, int j);

namespace {

void check_spin_cap(int n, int cap) {
    if (n < 1) throw std::invalid_argument("spin enumeration: n must be >= 1");
    if (n > cap)
        throw std::invalid_argument("spin enumeration: n exceeds cap " + std::to_string(cap));
}

// sum_i sigma_i for the configuration encoded in `bits`
inline int spin_sum(std::uint32_t bits, int n) {
    return 2 * std::popcount(bits) - n;
}

inline int pair_product(std::uint32_t bits, int i, int j) {
    return (((bits >> i) ^ (bits >> j)) & 1u) ? -1 : 1;
}

double quenched_logweight(const MultiGraph& g, double beta, double B, std::uint32_t bits) {
    int inter = 0;
    for (const auto& [i, j] : g.edges)
        inter += (i == j) ? 1 : pair_product(bits, i, j);
    return beta * inter + B * spin_sum(bits, g.n);
}

struct PairTerms {
    int n = 0;
    std::vector<double> log_aligned;  // log(e^{beta} p + 1 - p) per pair i<j
    std::vector<double> log_anti;     // log(e^{-beta} p + 1 - p)
    std::vector<int> pi, pj;
};

PairTerms grg_pair_terms(const WeightSequence& w, double beta) {
    PairTerms t;
    t.n = w.size();
    for (int i = 0; i < t.n; ++i)
        for (int j = i + 1; j < t.n; ++j) {
            const double p = grg_edge_prob_raw(w, i, j);
            t.log_aligned.push_back(std::log(std::exp(beta) * p + 1.0 - p));
            t.log_anti.push_back(std::log(std::exp(-beta) * p + 1.0 - p));
            t.pi.push_back(i);
            t.pj.push_back(j);
        }
    return t;
}

double annealed_grg_logweight(const PairTerms& t, double B, std::uint32_t bits) {
    double acc = B * spin_sum(bits, t.n);
    for (size_t k = 0; k < t.log_aligned.size(); ++k)
        acc += (pair_product(bits, t.pi[k], t.pj[k]) > 0) ? t.log_aligned[k] : t.log_anti[k];
    return acc;
}

void enumerate_pairings_rec(std::vector<int>& mate, int stubs, long long& count,
                            const std::function<void(const std::vector<int>&)>& visit) {
    int s = 0;
    while (s < stubs && mate[static_cast<size_t>(s)] >= 0) ++s;
    if (s == stubs) {
        ++count;
        visit(mate);
        return;
    }
    for (int t = s + 1; t < stubs; ++t) {
        if (mate[static_cast<size_t>(t)] >= 0) continue;
        mate[static_cast<size_t>(s)] = t;
        mate[static_cast<size_t>(t)] = s;
        enumerate_pairings_rec(mate, stubs, count, visit);
        mate[static_cast<size_t>(s)] = -1;
        mate[static_cast<size_t>(t)] = -1;
    }
}

}  // namespace

double spin_logsumexp_serial(int n, const std::function<double(std::uint32_t)>& log_weight) {
    const std::uint64_t total = 1ull << n;
    SignedLogAccumulator acc;
    for (std::uint64_t c = 0; c < total; ++c)
        acc.add_log(log_weight(static_cast<std::uint32_t>(c)));
    return acc.log_abs();
}

double spin_logsumexp_omp(int n, const std::function<double(std::uint32_t)>& log_weight) {
    const std::uint64_t total = 1ull << n;
    const auto chunks = make_chunks(static_cast<std::int64_t>(total), max_threads());
    std::vector<SignedLogAccumulator> partial(chunks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (std::size_t k = 0; k < chunks.size(); ++k) {
        SignedLogAccumulator acc;
        for (std::int64_t c = chunks[k].begin; c < chunks[k].end; ++c)
            acc.add_log(log_weight(static_cast<std::uint32_t>(c)));
        partial[k] = acc;
    }
    SignedLogAccumulator out;
    for (const auto& p : partial) out.merge(p);
    return out.log_abs();
}

LogValue exact_quenched_Z(const MultiGraph& g, double beta, double B, int cap) {
    check_spin_cap(g.n, cap);
    for (const auto& [i, j] : g.edges)
        if (i < 0 || j < 0 || i >= g.n || j >= g.n)
            throw std::invalid_argument("exact_quenched_Z: edge endpoint out of range");
    const double lz = spin_logsumexp_omp(
        g.n, [&](std::uint32_t bits) { return quenched_logweight(g, beta, B, bits); });
    return LogValue::from_log(lz);
}

std::vector<double> quenched_logweights(const MultiGraph& g, double beta, double B, int cap) {
    check_spin_cap(g.n, cap);
    std::vector<double> out(1ull << g.n);
    for (std::uint64_t c = 0; c < out.size(); ++c)
        out[c] = quenched_logweight(g, beta, B, static_cast<std::uint32_t>(c));
    return out;
}

LogValue exact_annealed_Z_grg(const WeightSequence& w, double beta, double B, int cap) {
    check_spin_cap(w.size(), cap);
    const PairTerms t = grg_pair_terms(w, beta);
    const double lz = spin_logsumexp_omp(
        w.size(), [&](std::uint32_t bits) { return annealed_grg_logweight(t, B, bits); });
    return LogValue::from_log(lz);
}

std::vector<double> annealed_logweights_grg(const WeightSequence& w, double beta, double B,
                                            int cap) {
    check_spin_cap(w.size(), cap);
    const PairTerms t = grg_pair_terms(w, beta);
    std::vector<double> out(1ull << w.size());
    for (std::uint64_t c = 0; c < out.size(); ++c)
        out[c] = annealed_grg_logweight(t, B, static_cast<std::uint32_t>(c));
    return out;
}

long long enumerate_pairings(int stubs,
                             const std::function<void(const std::vector<int>&)>& visit) {
    if (stubs < 0 || stubs % 2 != 0)
        throw std::invalid_argument("enumerate_pairings: stub count must be even");
    std::vector<int> mate(static_cast<size_t>(stubs), -1);
    long long count = 0;
    enumerate_pairings_rec(mate, stubs, count, visit);
    return count;
}

namespace {

MultiGraph pairing_to_graph(const DegreeSequence& d, const std::vector<int>& mate) {
    MultiGraph g;
    g.n = d.size();
    std::vector<int> stub_vertex;
    stub_vertex.reserve(static_cast<size_t>(d.ell()));
    for (int v = 0; v < d.size(); ++v)
        for (int k = 0; k < d.degree(v); ++k) stub_vertex.push_back(v);
    for (int s = 0; s < static_cast<int>(mate.size()); ++s)
        if (mate[static_cast<size_t>(s)] > s)
            g.edges.emplace_back(stub_vertex[static_cast<size_t>(s)],
                                 stub_vertex[static_cast<size_t>(mate[static_cast<size_t>(s)])]);
    return g;
}

}  // namespace

LogValue exact_annealed_Z_cm(const DegreeSequence& d, double beta, double B, int cap) {
    if (d.ell() > cap)
        throw std::invalid_argument("exact_annealed_Z_cm: stub count exceeds cap " +
                                    std::to_string(cap));
    SignedLogAccumulator acc;
    const long long count = enumerate_pairings(
        static_cast<int>(d.ell()), [&](const std::vector<int>& mate) {
            const MultiGraph g = pairing_to_graph(d, mate);
            acc.add_log(exact_quenched_Z(g, beta, B).log());
        });
    return LogValue::from_log(acc.log_abs() - std::log(static_cast<double>(count)));
}

std::vector<double> annealed_spin_probs_cm(const DegreeSequence& d, double beta, double B,
                                           int cap) {
    if (d.ell() > cap)
        throw std::invalid_argument("annealed_spin_probs_cm: stub count exceeds cap");
    const std::uint64_t states = 1ull << d.size();
    std::vector<SignedLogAccumulator> acc(states);
    enumerate_pairings(static_cast<int>(d.ell()), [&](const std::vector<int>& mate) {
        const MultiGraph g = pairing_to_graph(d, mate);
        for (std::uint64_t c = 0; c < states; ++c)
            acc[c].add_log(quenched_logweight(g, beta, B, static_cast<std::uint32_t>(c)));
    });
    std::vector<double> logs(states);
    for (std::uint64_t c = 0; c < states; ++c) logs[c] = acc[c].log_abs();
    const double lz = log_sum_exp(logs);
    std::vector<double> probs(states);
    for (std::uint64_t c = 0; c < states; ++c) probs[c] = std::exp(logs[c] - lz);
    return probs;
}

LogValue transfer_matrix_cycle_Z(int n, double beta, double B) {
    if (n < 1) throw std::invalid_argument("transfer_matrix_cycle_Z: n must be >= 1");
    const auto eig = transfer_eigen(beta, B);
    const double lz = n * std::log(eig.lambda_plus) + std::log1p(std::pow(eig.r, n));
    return LogValue::from_log(lz);
}

LogValue transfer_matrix_line_Z(int n, double beta, double B) {
    if (n < 2) throw std::invalid_argument("transfer_matrix_line_Z: n must be >= 2");
    const auto eig = transfer_eigen(beta, B);
    const auto amp = line_amplitudes(beta, B);
    const LogValue plus =
        LogValue::from_value(amp.a_plus) * LogValue::from_value(eig.lambda_plus).pow_int(n);
    const LogValue minus =
        LogValue::from_value(amp.a_minus) * LogValue::from_value(eig.lambda_minus).pow_int(n);
    return plus + minus;
}

}  // namespace anneal
