#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "qubobench/chimera.hpp"
#include "qubobench/embedding.hpp"
#include "qubobench/qubo.hpp"

namespace qubobench {

/// Per-call resource contract of the simulated annealing backend.
struct SubSolverBudget {
    int max_clique_size = 65;     // largest fully-connected sub-problem accepted
    int num_reads = 50;           // independent anneals per sub-problem
    int anneal_sweeps = 500;      // full single-flip sweeps per read
    double chain_strength = 0.0;  // <= 0 selects 1 + max |logical coefficient|
    int embed_effort = 5;         // restart cap for the heuristic embedder
    std::uint64_t rng_seed = 0;
};

/// Runs `num_reads` independent single-flip simulated anneals of the hardware
/// qubo with a geometric temperature schedule from max|coefficient| down to
/// 1e-3 * max|coefficient| over `sweeps` sweeps. Read r draws its own stream
/// from (seed, r), so results do not depend on scheduling. Returns all reads
/// (full-length hardware bit vectors) sorted by energy ascending, equal
/// energies ordered by assignment word. The default entry point runs reads in
/// parallel with OpenMP; the serial variant is the reference implementation
/// and produces bit-identical output.
std::vector<std::vector<std::uint8_t>> sample(const Qubo& hw_qubo, const ChimeraTopology& topo,
                                              int num_reads, int anneal_sweeps,
                                              std::uint64_t seed);
std::vector<std::vector<std::uint8_t>> sample_serial(const Qubo& hw_qubo,
                                                     const ChimeraTopology& topo, int num_reads,
                                                     int anneal_sweeps, std::uint64_t seed);

/// Global minimum by exhaustive Gray-code enumeration; ties resolve to the
/// smallest assignment word. Hard cap num_vars <= 22 (CapacityExceeded
/// above). The default entry point splits the enumeration across OpenMP
/// threads; the serial variant is the reference implementation.
inline constexpr int kExactSolveMaxVars = 22;
Solution exact_solve(const Qubo& qubo);
Solution exact_solve_serial(const Qubo& qubo);

struct SubsolveResult {
    Solution solution;
    double embedding_seconds = 0.0;
    double quantum_seconds = 0.0;
};

/// Simulated stand-in for a size-limited annealing device: accepts sub-QUBOs
/// up to max_clique_size variables, maps them onto one cached clique
/// embedding (computed once and reused, so no per-call embedding search),
/// anneals on the hardware graph and majority-votes chains back to a logical
/// solution. Thread-safe; subsolve is a pure function of (qubo, seed, budget).
class AnnealerBackend {
public:
    AnnealerBackend(ChimeraTopology topo, SubSolverBudget budget);

    const ChimeraTopology& topology() const { return topo_; }
    const SubSolverBudget& budget() const { return budget_; }
    int capacity() const { return budget_.max_clique_size; }

    /// Solves on the cached clique embedding. Throws CapacityExceeded when
    /// the sub-problem has more than capacity() variables.
    SubsolveResult subsolve(const Qubo& sub, std::uint64_t seed) const;

    /// Solves with a caller-supplied embedding (no size cap beyond hardware).
    SubsolveResult subsolve_embedded(const Qubo& sub, const Embedding& emb,
                                     std::uint64_t seed) const;

private:
    const Embedding& cached_clique() const;
    SubsolveResult run(const Qubo& sub, const Embedding& emb, std::uint64_t seed,
                       double embed_setup_seconds) const;

    ChimeraTopology topo_;
    SubSolverBudget budget_;
    mutable std::once_flag cache_once_;
    mutable std::optional<Embedding> clique_cache_;
};

}  // namespace qubobench
