#include "qubobench/annealer.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qubobench/errors.hpp"
#include "qubobench/rng.hpp"

namespace qubobench {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Compact view of the active variables of a (possibly hardware-sized) qubo.
struct ActiveProblem {
    std::vector<int> vars;  // active variable indices, ascending
    CompiledQubo compiled;  // over local indices

    explicit ActiveProblem(const Qubo& q) {
        vars = q.active_variables();
        std::vector<int> local(q.num_vars(), -1);
        for (std::size_t i = 0; i < vars.size(); ++i) local[vars[i]] = static_cast<int>(i);
        Qubo dense(static_cast<int>(vars.size()), q.offset());
        for (const auto& [i, a] : q.linear_terms()) dense.add_linear(local[i], a);
        for (const auto& [key, b] : q.quadratic_terms())
            dense.add_quadratic(local[key.first], local[key.second], b);
        compiled = CompiledQubo::from(dense);
    }
};

void anneal_one_read(const ActiveProblem& prob, int sweeps, Rng rng,
                     std::vector<std::uint8_t>& bits) {
    const CompiledQubo& c = prob.compiled;
    const int n = c.n;
    bits.assign(n, 0);
    for (int i = 0; i < n; ++i) bits[i] = rng.next_bit() ? 1 : 0;
    if (n == 0 || sweeps <= 0) return;

    double max_abs = 0.0;
    for (double b : c.bias) max_abs = std::max(max_abs, std::abs(b));
    for (double w : c.adj_weight) max_abs = std::max(max_abs, std::abs(w));
    if (max_abs == 0.0) return;  // flat landscape, any assignment is optimal

    const double t_hot = max_abs;
    const double t_cold = 1e-3 * max_abs;
    const double ratio = t_cold / t_hot;

    // Coupling field f_i = sum_j b_ij x_j, maintained incrementally.
    std::vector<double> field(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (!bits[i]) continue;
        for (int a = c.adj_start[i]; a < c.adj_start[i + 1]; ++a)
            field[c.adj_index[a]] += c.adj_weight[a];
    }

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        const double frac = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 1.0;
        const double temp = t_hot * std::pow(ratio, frac);
        const double inv_temp = 1.0 / temp;
        for (int i = 0; i < n; ++i) {
            const double delta = (bits[i] ? -1.0 : 1.0) * (c.bias[i] + field[i]);
            if (delta > 0.0 && rng.next_double() >= std::exp(-delta * inv_temp)) continue;
            const double sign = bits[i] ? -1.0 : 1.0;
            bits[i] ^= 1;
            for (int a = c.adj_start[i]; a < c.adj_start[i + 1]; ++a)
                field[c.adj_index[a]] += sign * c.adj_weight[a];
        }
    }
}

std::vector<std::vector<std::uint8_t>> sample_impl(const Qubo& hw_qubo,
                                                   const ChimeraTopology& topo, int num_reads,
                                                   int anneal_sweeps, std::uint64_t seed,
                                                   bool parallel) {
    if (num_reads < 1) throw std::invalid_argument("sample: num_reads must be positive");
    for (int q : hw_qubo.active_variables())
        if (q >= topo.num_qubits())
            throw std::invalid_argument("sample: qubo variable outside the hardware graph");

    const ActiveProblem prob(hw_qubo);
    std::vector<std::vector<std::uint8_t>> local(num_reads);
    std::vector<double> energy(num_reads);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int r = 0; r < num_reads; ++r) {
        anneal_one_read(prob, anneal_sweeps, Rng(mix_seed(seed, r)), local[r]);
        energy[r] = prob.compiled.energy(local[r]);
    }

    std::vector<int> order(num_reads);
    for (int r = 0; r < num_reads; ++r) order[r] = r;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (energy[a] != energy[b]) return energy[a] < energy[b];
        return assignment_less(local[a], local[b]);
    });

    std::vector<std::vector<std::uint8_t>> out(num_reads);
    for (int r = 0; r < num_reads; ++r) {
        std::vector<std::uint8_t> full(hw_qubo.num_vars(), 0);
        const auto& bits = local[order[r]];
        for (std::size_t i = 0; i < prob.vars.size(); ++i) full[prob.vars[i]] = bits[i];
        out[r] = std::move(full);
    }
    return out;
}

struct ExactBest {
    double energy;
    std::uint32_t word;
};

// Walks assignments t = lo..hi-1 in Gray-code order (state = t ^ (t >> 1)),
// updating the energy by the single flipped bit each step.
ExactBest exact_scan_range(const CompiledQubo& c, std::uint32_t lo, std::uint32_t hi) {
    const int n = c.n;
    std::uint32_t state = lo ^ (lo >> 1);
    std::vector<std::uint8_t> bits(n, 0);
    for (int i = 0; i < n; ++i) bits[i] = (state >> i) & 1u;
    double e = c.energy(bits);

    ExactBest best{e, state};
    for (std::uint32_t t = lo; t + 1 < hi; ++t) {
        const int flip = std::countr_zero(t + 1);
        e += c.flip_delta(bits, flip);
        bits[flip] ^= 1;
        state ^= 1u << flip;
        if (e < best.energy || (e == best.energy && state < best.word)) best = {e, state};
    }
    return best;
}

Solution exact_impl(const Qubo& qubo, bool parallel) {
    const int n = qubo.num_vars();
    if (n > kExactSolveMaxVars)
        throw CapacityExceeded("exact_solve: " + std::to_string(n) + " variables exceeds the cap of " +
                               std::to_string(kExactSolveMaxVars));
    if (n == 0) return {std::vector<std::uint8_t>{}, qubo.offset()};

    const CompiledQubo c = CompiledQubo::from(qubo);
    const std::uint64_t total = 1ull << n;

    ExactBest best{0.0, 0};
    if (!parallel || n < 12) {
        best = exact_scan_range(c, 0, static_cast<std::uint32_t>(total));
    } else {
        const int chunks = 64;
        std::vector<ExactBest> partial(chunks);
#pragma omp parallel for schedule(static)
        for (int k = 0; k < chunks; ++k) {
            const std::uint32_t lo = static_cast<std::uint32_t>(total * k / chunks);
            const std::uint32_t hi = static_cast<std::uint32_t>(total * (k + 1) / chunks);
            partial[k] = exact_scan_range(c, lo, hi);
        }
        best = partial[0];
        for (int k = 1; k < chunks; ++k) {
            if (partial[k].energy < best.energy ||
                (partial[k].energy == best.energy && partial[k].word < best.word))
                best = partial[k];
        }
    }

    std::vector<std::uint8_t> bits(n, 0);
    for (int i = 0; i < n; ++i) bits[i] = (best.word >> i) & 1u;
    const double energy = qubo.energy(bits);
    return {std::move(bits), energy};
}

}  // namespace

std::vector<std::vector<std::uint8_t>> sample(const Qubo& hw_qubo, const ChimeraTopology& topo,
                                              int num_reads, int anneal_sweeps,
                                              std::uint64_t seed) {
    return sample_impl(hw_qubo, topo, num_reads, anneal_sweeps, seed, true);
}

std::vector<std::vector<std::uint8_t>> sample_serial(const Qubo& hw_qubo,
                                                     const ChimeraTopology& topo, int num_reads,
                                                     int anneal_sweeps, std::uint64_t seed) {
    return sample_impl(hw_qubo, topo, num_reads, anneal_sweeps, seed, false);
}

Solution exact_solve(const Qubo& qubo) { return exact_impl(qubo, true); }

Solution exact_solve_serial(const Qubo& qubo) { return exact_impl(qubo, false); }

AnnealerBackend::AnnealerBackend(ChimeraTopology topo, SubSolverBudget budget)
    : topo_(topo), budget_(budget) {
    if (budget_.max_clique_size < 1 || budget_.max_clique_size > topo_.max_clique_minor())
        throw std::invalid_argument("backend: max_clique_size must lie in [1, 4m+1]");
    if (budget_.num_reads < 1 || budget_.anneal_sweeps < 1)
        throw std::invalid_argument("backend: reads and sweeps must be positive");
}

const Embedding& AnnealerBackend::cached_clique() const {
    std::call_once(cache_once_,
                   [this] { clique_cache_ = clique_embedding(budget_.max_clique_size, topo_); });
    return *clique_cache_;
}

SubsolveResult AnnealerBackend::subsolve(const Qubo& sub, std::uint64_t seed) const {
    if (sub.num_vars() > capacity())
        throw CapacityExceeded("subsolve: sub-problem of " + std::to_string(sub.num_vars()) +
                               " variables exceeds capacity " + std::to_string(capacity()));
    if (sub.num_vars() == 0)
        return {{std::vector<std::uint8_t>{}, sub.offset()}, 0.0, 0.0};

    // Reuse of the one precomputed clique embedding: any sub-problem of equal
    // or lesser size maps onto its first chains, so no embedding search runs.
    const auto t0 = std::chrono::steady_clock::now();
    const Embedding& full = cached_clique();
    Embedding view;
    view.chains.assign(full.chains.begin(), full.chains.begin() + sub.num_vars());
    return run(sub, view, seed, seconds_since(t0));
}

SubsolveResult AnnealerBackend::subsolve_embedded(const Qubo& sub, const Embedding& emb,
                                                  std::uint64_t seed) const {
    return run(sub, emb, seed, 0.0);
}

SubsolveResult AnnealerBackend::run(const Qubo& sub, const Embedding& emb, std::uint64_t seed,
                                    double embed_setup_seconds) const {
    const auto t0 = std::chrono::steady_clock::now();
    const double strength =
        budget_.chain_strength > 0.0 ? budget_.chain_strength : auto_chain_strength(sub);
    const Qubo hw = embed_qubo(sub, emb, strength, topo_);
    const double embed_seconds = embed_setup_seconds + seconds_since(t0);

    const auto t1 = std::chrono::steady_clock::now();
    const auto reads =
        sample(hw, topo_, budget_.num_reads, budget_.anneal_sweeps, mix_seed(budget_.rng_seed, seed));
    auto solutions = unembed(reads, emb, sub);
    SubsolveResult out;
    out.solution = solutions.front();
    for (const auto& s : solutions) {
        if (s.energy < out.solution.energy ||
            (s.energy == out.solution.energy && assignment_less(s.bits, out.solution.bits)))
            out.solution = s;
    }
    out.embedding_seconds = embed_seconds;
    out.quantum_seconds = seconds_since(t1);
    return out;
}

}  // namespace qubobench
