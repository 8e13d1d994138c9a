// Thread-count plumbing for the OpenMP kernels. Each kernel ships a serial
// reference and an OMP variant; reductions run over fixed contiguous chunks
// merged in index order, so results are bit-stable for a given thread count.
#pragma once

#include <cstdint>
#include <vector>

namespace anneal {

// global worker count: ANNEAL_THREADS env var, overridable at runtime
int max_threads();
void set_max_threads(int n);

struct Chunk {
    std::int64_t begin;
    std::int64_t end;
};

// n items split into `parts` near-equal contiguous chunks (empty ones dropped)
std::vector<Chunk> make_chunks(std::int64_t n, int parts);

}  // namespace anneal
