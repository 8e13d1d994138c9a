// Benchmark the OpenMP kernels against their serial references.
// Usage: bench_kernels [threads]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "anneal/cm12_annealed.hpp"
#include "anneal/exact_oracles.hpp"
#include "anneal/graph_models.hpp"
#include "anneal/grg_annealed.hpp"
#include "anneal/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace anneal;
using Clock = std::chrono::steady_clock;

namespace {

template <typename F>
double time_best_of(int tries, F&& f) {
    double best = 1e300;
    for (int t = 0; t < tries; ++t) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel, double delta) {
    std::printf("%-28s serial %8.3f s   omp %8.3f s   speedup %5.2fx   |delta| %.2e\n", name,
                serial, parallel, serial / parallel, delta);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) set_max_threads(std::atoi(argv[1]));
#ifdef _OPENMP
    omp_set_num_threads(max_threads());
    std::printf("threads: %d (OpenMP)\n", max_threads());
#else
    std::printf("threads: 1 (no OpenMP at build time)\n");
#endif

    {
        // 2^22-configuration spin enumeration on a 22-cycle
        MultiGraph g{22, {}};
        for (int i = 0; i < 22; ++i) g.edges.push_back({i, (i + 1) % 22});
        const auto f = [&](std::uint32_t bits) {
            int inter = 0;
            for (const auto& [a, b] : g.edges)
                inter += (((bits >> a) ^ (bits >> b)) & 1u) ? -1 : 1;
            return 0.4 * inter + 0.1 * (2 * __builtin_popcount(bits) - 22);
        };
        double serial_val = 0.0, omp_val = 0.0;
        const double ts = time_best_of(3, [&] { serial_val = spin_logsumexp_serial(22, f); });
        const double tp = time_best_of(3, [&] { omp_val = spin_logsumexp_omp(22, f); });
        report("spin enumeration 2^22", ts, tp, std::abs(serial_val - omp_val));
    }

    {
        // CM(1,2) lines generating function, N = 6000 scale
        const int n1 = 3000, n2 = 3000;
        SignedLogValue sv{}, pv{};
        const double ts =
            time_best_of(3, [&] { sv = lines_gf_log_serial(n1, n2, 0, 0.3, 0.4); });
        const double tp = time_best_of(3, [&] { pv = lines_gf_log(n1, n2, 0, 0.3, 0.4); });
        report("lines GF 1500x3000", ts, tp, std::abs(sv.log_abs - pv.log_abs));
    }

    {
        // dense effective-coupling build, N = 3000 (row-parallel)
        const auto w = WeightSequence::powerlaw(3000, 5.0, 1.0);
        const int saved = max_threads();
        double g2s = 0.0, g2p = 0.0;
        set_max_threads(1);
        const double ts = time_best_of(2, [&] { g2s = log_g2(w, 0.6); });
        set_max_threads(saved);
        const double tp = time_best_of(2, [&] { g2p = log_g2(w, 0.6); });
        report("coupling aggregate N=3000", ts, tp, std::abs(g2s - g2p));
    }

    return 0;
}
