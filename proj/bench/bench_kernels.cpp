// Timing comparison of the OpenMP-parallel kernels against their serial
// reference implementations: the hardware annealing sampler, the exhaustive
// solver and the force-directed layout. Also asserts that both variants
// produce identical results, since parallelism must not change any output.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qubobench/annealer.hpp"
#include "qubobench/embedding.hpp"
#include "qubobench/layout.hpp"
#include "qubobench/problems.hpp"
#include "qubobench/rng.hpp"

using namespace qubobench;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_call(F&& f) {
    const double t0 = now_seconds();
    f();
    return now_seconds() - t0;
}

Qubo random_qubo(int n, double density, std::uint64_t seed) {
    Rng rng(seed);
    Qubo q(n);
    for (int i = 0; i < n; ++i) q.add_linear(i, rng.uniform(-2.0, 2.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(density)) q.add_quadratic(i, j, rng.uniform(-2.0, 2.0));
    return q;
}

void row(const char* kernel, double serial, double parallel, bool identical) {
    std::printf("%-22s %10.3fs %10.3fs %8.2fx   %s\n", kernel, serial, parallel,
                serial / parallel, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const int scale = argc > 1 ? std::atoi(argv[1]) : 1;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("%-22s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    bool all_identical = true;

    {
        const ChimeraTopology topo(16);
        const Embedding emb = clique_embedding(60, topo);
        const Qubo logical = random_qubo(60, 1.0, 1);
        const Qubo hw = embed_qubo(logical, emb, auto_chain_strength(logical), topo);
        std::vector<std::vector<std::uint8_t>> a, b;
        const double ts = time_call([&] { a = sample_serial(hw, topo, 50 * scale, 500, 7); });
        const double tp = time_call([&] { b = sample(hw, topo, 50 * scale, 500, 7); });
        row("sample (SA reads)", ts, tp, a == b);
        all_identical = all_identical && a == b;
    }

    {
        const Qubo q = random_qubo(22, 0.5, 2);
        Solution a, b;
        const double ts = time_call([&] { a = exact_solve_serial(q); });
        const double tp = time_call([&] { b = exact_solve(q); });
        row("exact_solve (2^22)", ts, tp, a == b);
        all_identical = all_identical && a == b;
    }

    {
        const auto instance = gen_dbg({25, 20, 5, 0.25, 0.1, AwardMode::Constant}, 3);
        const auto adj = instance.qubo.adjacency();
        std::vector<std::array<double, 2>> a, b;
        const double ts = time_call([&] { a = spring_layout_serial(adj, 200 * scale, 7); });
        const double tp = time_call([&] { b = spring_layout(adj, 200 * scale, 7); });
        row("spring_layout forces", ts, tp, a == b);
        all_identical = all_identical && a == b;
    }

    return all_identical ? 0 : 1;
}
