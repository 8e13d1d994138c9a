// Random graph construction: GRG edge sampling, configuration-model
// half-edge pairing, and decomposition of CM realizations into lines and tori.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anneal/rng.hpp"
#include "anneal/weights.hpp"

namespace anneal {

// edge i-j present independently with probability w_i w_j / (ell_N + w_i w_j)
double grg_edge_prob(const WeightSequence& w, int i, int j);

struct GrgSample {
    int n = 0;
    std::vector<std::pair<int, int>> edges;  // i < j, no self-edges, no repeats
    std::uint64_t seed = 0;
};

GrgSample sample_grg(const WeightSequence& w, Rng& rng);

// uniform perfect matching of half-edges. Stubs are numbered vertex by
// vertex; mate[s] is the stub paired with s.
struct Pairing {
    std::vector<int> mate;
    std::vector<int> stub_vertex;        // owning vertex of each stub
    std::vector<int> vertex_first_stub;  // index of the first stub of each vertex

    int stub_count() const { return static_cast<int>(mate.size()); }
    // multigraph edge list (one entry per stub pair, self-loops included)
    std::vector<std::pair<int, int>> edges() const;
};

Pairing stubs_of(const DegreeSequence& d);  // layout only, no pairing
Pairing sample_pairing(const DegreeSequence& d, Rng& rng);

// a CM realization reduced to component statistics.
// Lengths count vertices. For degrees in {1,2}: lines end in degree-1
// vertices and k_line = n1/2; tori contain only degree-2 vertices and
// m_n (the number of vertices in tori) is the sum of torus lengths.
struct GraphDecomposition {
    std::vector<int> line_lengths;
    std::vector<int> torus_lengths;
    int k_line = 0;
    int k_torus = 0;
    long long m_n = 0;

    std::string to_csv() const;  // columns: kind(line|torus),length
};

GraphDecomposition decompose(const DegreeSequence& d, const Pairing& p);
GraphDecomposition sample_cm(const DegreeSequence& d, Rng& rng);

// number of cycles of CM_N(2): sum over j of independent Bern(1/(2N-2j+1))
struct CycleCountCm2 {
    double exact_mean;
    int n;
    int sample(Rng& rng) const;
};
CycleCountCm2 cycle_count_cm2(int n);

// law of the first cycle length in CM_N(2):
// q_N(l) = prod_{j<l} (2N-2j)/(2N-2j+1) * 1/(2N-2l+1), l = 1..N
std::vector<double> first_cycle_law_cm2(int n);

}  // namespace anneal
