#include "anneal/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "anneal/graph_models.hpp"
#include "anneal/grg_annealed.hpp"
#include "anneal/parallel.hpp"
#include "anneal/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anneal {

namespace {

constexpr long long kDefaultBurnInSweeps = 100;

struct SpinState {
    std::vector<signed char> sigma;
    long long total = 0;  // running S_N

    void init_random(int n, Rng& rng) {
        sigma.resize(static_cast<size_t>(n));
        total = 0;
        for (auto& s : sigma) {
            s = bernoulli(rng, 0.5) ? 1 : -1;
            total += s;
        }
    }
    std::uint32_t bits() const {
        std::uint32_t b = 0;
        for (size_t i = 0; i < sigma.size(); ++i)
            if (sigma[i] > 0) b |= (1u << i);
        return b;
    }
};

// heat-bath draw: P(sigma_i = +1 | rest) = 1 / (1 + e^{-2h})
inline int heat_bath_spin(double h, Rng& rng) {
    return uniform01(rng) < 1.0 / (1.0 + std::exp(-2.0 * h)) ? 1 : -1;
}

void record(SampleBatch& out, const SpinState& st, const ChainConfig& cfg) {
    out.s_values.push_back(static_cast<double>(st.total));
    if (cfg.record_configs) out.configs.push_back(st.bits());
}

void validate(const ChainConfig& cfg, int n) {
    if (cfg.samples < 1 || cfg.thin_sweeps < 1)
        throw std::invalid_argument("ChainConfig: samples and thinning must be positive");
    if (cfg.record_configs && n > 20)
        throw std::invalid_argument("ChainConfig: config recording only supported for n <= 20");
}

}  // namespace

SampleBatch glauber_quenched(const MultiGraph& g, double beta, double B,
                             const ChainConfig& cfg) {
    validate(cfg, g.n);
    // adjacency with multiplicity; self-loops drop out of the local field
    std::vector<std::vector<int>> nbr(static_cast<size_t>(g.n));
    for (const auto& [i, j] : g.edges) {
        if (i == j) continue;
        nbr[static_cast<size_t>(i)].push_back(j);
        nbr[static_cast<size_t>(j)].push_back(i);
    }
    Rng rng = seeded_rng(cfg.seed);
    SpinState st;
    st.init_random(g.n, rng);

    auto update_site = [&](int i) {
        double h = B;
        for (int j : nbr[static_cast<size_t>(i)]) h += beta * st.sigma[static_cast<size_t>(j)];
        const int ns = heat_bath_spin(h, rng);
        st.total += ns - st.sigma[static_cast<size_t>(i)];
        st.sigma[static_cast<size_t>(i)] = static_cast<signed char>(ns);
    };
    auto sweep = [&] {
        for (int k = 0; k < g.n; ++k) update_site(static_cast<int>(uniform_index(rng, g.n)));
    };

    const long long burn = cfg.burn_in_sweeps >= 0 ? cfg.burn_in_sweeps : kDefaultBurnInSweeps;
    for (long long s = 0; s < burn; ++s) sweep();

    SampleBatch out;
    out.n = g.n;
    out.seed = cfg.seed;
    out.burn_in_sweeps = burn;
    out.thin_sweeps = cfg.thin_sweeps;
    out.s_values.reserve(static_cast<size_t>(cfg.samples));
    for (long long s = 0; s < cfg.samples; ++s) {
        for (long long t = 0; t < cfg.thin_sweeps; ++t) sweep();
        record(out, st, cfg);
    }
    return out;
}

SampleBatch glauber_annealed_grg(const WeightSequence& w, double beta, double B,
                                 const ChainConfig& cfg, int dense_cap) {
    const int n = w.size();
    validate(cfg, n);
    Rng rng = seeded_rng(cfg.seed);
    SpinState st;
    st.init_random(n, rng);

    SampleBatch out;
    out.n = n;
    out.seed = cfg.seed;
    out.thin_sweeps = cfg.thin_sweeps;
    const long long burn = cfg.burn_in_sweeps >= 0 ? cfg.burn_in_sweeps : kDefaultBurnInSweeps;
    out.burn_in_sweeps = burn;
    out.s_values.reserve(static_cast<size_t>(cfg.samples));

    if (n <= dense_cap) {
        const EffectiveCouplings couplings(w, beta);
        const auto& m = couplings.matrix();
        // cached local interaction field f_i = sum_j beta_ij sigma_j
        std::vector<double> f(static_cast<size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                acc += m[static_cast<size_t>(i) * n + j] * st.sigma[static_cast<size_t>(j)];
            f[static_cast<size_t>(i)] = acc;
        }
        auto update_site = [&](int i) {
            const int ns = heat_bath_spin(B + f[static_cast<size_t>(i)], rng);
            const int delta = ns - st.sigma[static_cast<size_t>(i)];
            if (delta == 0) return;
            st.total += delta;
            st.sigma[static_cast<size_t>(i)] = static_cast<signed char>(ns);
            const double* row = &m[static_cast<size_t>(i) * n];
            const double d = static_cast<double>(delta);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads()) if (n >= 2048)
#endif
            for (int j = 0; j < n; ++j) f[static_cast<size_t>(j)] += d * row[j];
        };
        auto sweep = [&] {
            for (int k = 0; k < n; ++k) update_site(static_cast<int>(uniform_index(rng, n)));
        };
        for (long long s = 0; s < burn; ++s) sweep();
        for (long long s = 0; s < cfg.samples; ++s) {
            for (long long t = 0; t < cfg.thin_sweeps; ++t) sweep();
            record(out, st, cfg);
        }
        return out;
    }

    // rank-1 fast path: couplings sinh(beta) w_i w_j / ell_N, field through
    // the scalar T = sum_j w_j sigma_j
    out.approximate_couplings = true;
    const double scale = std::sinh(beta) / w.ell();
    double T = 0.0;
    for (int j = 0; j < n; ++j) T += w.weight(j) * st.sigma[static_cast<size_t>(j)];
    auto update_site = [&](int i) {
        const double wi = w.weight(i);
        const double h = B + scale * wi * (T - wi * st.sigma[static_cast<size_t>(i)]);
        const int ns = heat_bath_spin(h, rng);
        const int delta = ns - st.sigma[static_cast<size_t>(i)];
        if (delta == 0) return;
        st.total += delta;
        T += delta * wi;
        st.sigma[static_cast<size_t>(i)] = static_cast<signed char>(ns);
    };
    auto sweep = [&] {
        for (int k = 0; k < n; ++k) update_site(static_cast<int>(uniform_index(rng, n)));
    };
    for (long long s = 0; s < burn; ++s) sweep();
    for (long long s = 0; s < cfg.samples; ++s) {
        for (long long t = 0; t < cfg.thin_sweeps; ++t) sweep();
        record(out, st, cfg);
    }
    return out;
}

SampleBatch joint_mcmc_cm(const DegreeSequence& d, double beta, double B,
                          const ChainConfig& cfg) {
    const int n = d.size();
    validate(cfg, n);
    Rng rng = seeded_rng(cfg.seed);

    Pairing pairing = sample_pairing(d, rng);
    const int ell = pairing.stub_count();
    const int n_edges = ell / 2;
    if (n_edges < 1) throw std::invalid_argument("joint_mcmc_cm: need at least one edge");

    // edge slots as stub pairs
    std::vector<std::pair<int, int>> edge_stubs;
    edge_stubs.reserve(static_cast<size_t>(n_edges));
    for (int s = 0; s < ell; ++s) {
        const int t = pairing.mate[static_cast<size_t>(s)];
        if (t > s) edge_stubs.emplace_back(s, t);
    }

    SpinState st;
    st.init_random(n, rng);

    auto vertex_of = [&](int stub) { return pairing.stub_vertex[static_cast<size_t>(stub)]; };
    auto bond = [&](int sa, int sb) {
        const int u = vertex_of(sa), v = vertex_of(sb);
        return u == v ? 1
                      : st.sigma[static_cast<size_t>(u)] * st.sigma[static_cast<size_t>(v)];
    };

    long long proposed = 0, accepted = 0;
    auto switch_move = [&] {
        if (n_edges < 2) return;  // a single edge has no alternative pairing move
        const int e1 = static_cast<int>(uniform_index(rng, static_cast<size_t>(n_edges)));
        int e2 = static_cast<int>(uniform_index(rng, static_cast<size_t>(n_edges - 1)));
        if (e2 >= e1) ++e2;
        auto [a, b] = edge_stubs[static_cast<size_t>(e1)];
        auto [c, dd] = edge_stubs[static_cast<size_t>(e2)];
        // the two alternative re-pairings of the four stubs
        int na1, nb1, na2, nb2;
        if (bernoulli(rng, 0.5)) {
            na1 = a; nb1 = c; na2 = b; nb2 = dd;
        } else {
            na1 = a; nb1 = dd; na2 = b; nb2 = c;
        }
        ++proposed;
        const int delta = bond(na1, nb1) + bond(na2, nb2) - bond(a, b) - bond(c, dd);
        if (delta < 0 && uniform01(rng) >= std::exp(beta * delta)) return;
        ++accepted;
        pairing.mate[static_cast<size_t>(na1)] = nb1;
        pairing.mate[static_cast<size_t>(nb1)] = na1;
        pairing.mate[static_cast<size_t>(na2)] = nb2;
        pairing.mate[static_cast<size_t>(nb2)] = na2;
        edge_stubs[static_cast<size_t>(e1)] = {na1, nb1};
        edge_stubs[static_cast<size_t>(e2)] = {na2, nb2};
    };

    auto update_site = [&](int i) {
        double h = B;
        const int first = pairing.vertex_first_stub[static_cast<size_t>(i)];
        for (int k = 0; k < d.degree(i); ++k) {
            const int u = vertex_of(pairing.mate[static_cast<size_t>(first + k)]);
            if (u != i) h += beta * st.sigma[static_cast<size_t>(u)];
        }
        const int ns = heat_bath_spin(h, rng);
        st.total += ns - st.sigma[static_cast<size_t>(i)];
        st.sigma[static_cast<size_t>(i)] = static_cast<signed char>(ns);
    };

    auto sweep = [&] {
        for (int k = 0; k < n; ++k) update_site(static_cast<int>(uniform_index(rng, n)));
        for (int k = 0; k < n_edges; ++k) switch_move();
    };

    const long long burn = cfg.burn_in_sweeps >= 0 ? cfg.burn_in_sweeps : kDefaultBurnInSweeps;
    for (long long s = 0; s < 10ll * ell; ++s) switch_move();  // pre-mix the pairing
    for (long long s = 0; s < burn; ++s) sweep();

    proposed = 0;
    accepted = 0;
    SampleBatch out;
    out.n = n;
    out.seed = cfg.seed;
    out.burn_in_sweeps = burn;
    out.thin_sweeps = cfg.thin_sweeps;
    out.s_values.reserve(static_cast<size_t>(cfg.samples));
    for (long long s = 0; s < cfg.samples; ++s) {
        for (long long t = 0; t < cfg.thin_sweeps; ++t) sweep();
        record(out, st, cfg);
    }
    out.switch_acceptance =
        proposed > 0 ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
    return out;
}

}  // namespace anneal
