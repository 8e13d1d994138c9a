#include "anneal/graph_models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace anneal {

double grg_edge_prob_raw(const WeightSequence& w, int i, int j) {
    const double ww = w.weight(i) * w.weight(j);
    return ww / (w.ell() + ww);
}

double grg_edge_prob(const WeightSequence& w, int i, int j) {
    if (i == j) throw std::invalid_argument("grg_edge_prob: i == j (no self-edges)");
    if (i < 0 || j < 0 || i >= w.size() || j >= w.size())
        throw std::invalid_argument("grg_edge_prob: index out of range");
    return grg_edge_prob_raw(w, i, j);
}

GrgSample sample_grg(const WeightSequence& w, Rng& rng) {
    GrgSample g;
    g.n = w.size();
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j)
            if (bernoulli(rng, grg_edge_prob_raw(w, i, j))) g.edges.emplace_back(i, j);
    return g;
}

Pairing stubs_of(const DegreeSequence& d) {
    Pairing p;
    p.mate.assign(static_cast<size_t>(d.ell()), -1);
    p.vertex_first_stub.resize(static_cast<size_t>(d.size()));
    p.stub_vertex.reserve(static_cast<size_t>(d.ell()));
    for (int v = 0; v < d.size(); ++v) {
        p.vertex_first_stub[static_cast<size_t>(v)] = static_cast<int>(p.stub_vertex.size());
        for (int k = 0; k < d.degree(v); ++k) p.stub_vertex.push_back(v);
    }
    return p;
}

std::vector<std::pair<int, int>> Pairing::edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve(mate.size() / 2);
    for (int s = 0; s < stub_count(); ++s) {
        const int t = mate[static_cast<size_t>(s)];
        if (t > s)
            e.emplace_back(stub_vertex[static_cast<size_t>(s)], stub_vertex[static_cast<size_t>(t)]);
    }
    return e;
}

Pairing sample_pairing(const DegreeSequence& d, Rng& rng) {
    Pairing p = stubs_of(d);
    // sequential uniform pairing: repeatedly match the first free stub with a
    // uniformly chosen remaining one (the construction behind the Bernoulli
    // cycle-count representation)
    std::vector<int> avail(p.mate.size());
    for (size_t s = 0; s < avail.size(); ++s) avail[s] = static_cast<int>(s);
    while (!avail.empty()) {
        const int s = avail.front();
        avail.front() = avail.back();
        avail.pop_back();
        const size_t pick = uniform_index(rng, avail.size());
        const int t = avail[pick];
        avail[pick] = avail.back();
        avail.pop_back();
        p.mate[static_cast<size_t>(s)] = t;
        p.mate[static_cast<size_t>(t)] = s;
    }
    return p;
}

GraphDecomposition decompose(const DegreeSequence& d, const Pairing& p) {
    for (int v = 0; v < d.size(); ++v)
        if (d.degree(v) > 2)
            throw std::invalid_argument("decompose: only degrees in {1,2} are supported");
    GraphDecomposition out;
    std::vector<char> seen(static_cast<size_t>(d.size()), 0);

    auto other_stub = [&](int vertex, int stub) -> int {
        const int first = p.vertex_first_stub[static_cast<size_t>(vertex)];
        if (d.degree(vertex) == 1) return -1;
        return (stub == first) ? first + 1 : first;
    };

    // lines: walk from each unseen degree-1 vertex
    for (int v = 0; v < d.size(); ++v) {
        if (d.degree(v) != 1 || seen[static_cast<size_t>(v)]) continue;
        seen[static_cast<size_t>(v)] = 1;
        int length = 1;
        int stub = p.vertex_first_stub[static_cast<size_t>(v)];
        while (true) {
            const int mate = p.mate[static_cast<size_t>(stub)];
            const int u = p.stub_vertex[static_cast<size_t>(mate)];
            seen[static_cast<size_t>(u)] = 1;
            ++length;
            const int next = other_stub(u, mate);
            if (next < 0) break;  // reached the far degree-1 endpoint
            stub = next;
        }
        out.line_lengths.push_back(length);
    }

    // remaining components are cycles of degree-2 vertices
    for (int v = 0; v < d.size(); ++v) {
        if (seen[static_cast<size_t>(v)]) continue;
        seen[static_cast<size_t>(v)] = 1;
        int length = 1;
        int stub = p.vertex_first_stub[static_cast<size_t>(v)];
        while (true) {
            const int mate = p.mate[static_cast<size_t>(stub)];
            const int u = p.stub_vertex[static_cast<size_t>(mate)];
            if (u == v) break;  // cycle closed (a self-loop closes immediately)
            seen[static_cast<size_t>(u)] = 1;
            ++length;
            stub = other_stub(u, mate);
        }
        out.torus_lengths.push_back(length);
        out.m_n += length;
    }

    out.k_line = static_cast<int>(out.line_lengths.size());
    out.k_torus = static_cast<int>(out.torus_lengths.size());
    return out;
}

GraphDecomposition sample_cm(const DegreeSequence& d, Rng& rng) {
    const Pairing p = sample_pairing(d, rng);
    return decompose(d, p);
}

std::string GraphDecomposition::to_csv() const {
    std::ostringstream out;
    out << "kind,length\n";
    for (int l : line_lengths) out << "line," << l << "\n";
    for (int l : torus_lengths) out << "torus," << l << "\n";
    return out.str();
}

CycleCountCm2 cycle_count_cm2(int n) {
    if (n < 1) throw std::invalid_argument("cycle_count_cm2: n must be >= 1");
    double mean = 0.0;
    for (int j = 1; j <= n; ++j) mean += 1.0 / (2.0 * n - 2.0 * j + 1.0);
    return CycleCountCm2{mean, n};
}

int CycleCountCm2::sample(Rng& rng) const {
    int k = 0;
    for (int j = 1; j <= n; ++j)
        if (bernoulli(rng, 1.0 / (2.0 * n - 2.0 * j + 1.0))) ++k;
    return k;
}

std::vector<double> first_cycle_law_cm2(int n) {
    if (n < 1) throw std::invalid_argument("first_cycle_law_cm2: n must be >= 1");
    std::vector<double> q(static_cast<size_t>(n));
    double open_prob = 1.0;  // prod_{j<l} (2N-2j)/(2N-2j+1)
    for (int l = 1; l <= n; ++l) {
        const double odd = 2.0 * n - 2.0 * l + 1.0;
        q[static_cast<size_t>(l - 1)] = open_prob / odd;
        open_prob *= (odd - 1.0) / odd;
    }
    return q;
}

}  // namespace anneal
