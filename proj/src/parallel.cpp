#include "anneal/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace anneal {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("ANNEAL_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int g_threads = initial_thread_count();

}  // namespace

int max_threads() { return g_threads; }

void set_max_threads(int n) { g_threads = n >= 1 ? n : 1; }

std::vector<Chunk> make_chunks(std::int64_t n, int parts) {
    std::vector<Chunk> chunks;
    if (n <= 0 || parts < 1) return chunks;
    const std::int64_t p = parts;
    const std::int64_t base = n / p;
    const std::int64_t rem = n % p;
    std::int64_t at = 0;
    for (std::int64_t k = 0; k < p && at < n; ++k) {
        const std::int64_t len = base + (k < rem ? 1 : 0);
        if (len == 0) continue;
        chunks.push_back({at, at + len});
        at += len;
    }
    return chunks;
}

}  // namespace anneal
