#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "qubobench/annealer.hpp"
#include "qubobench/qubo.hpp"

namespace qubobench {

/// Result of one solver run: the solution, the classical/embedding/quantum
/// wall-clock split and sub-problem statistics. classical_seconds is defined
/// as total minus embedding minus quantum, so the three parts always sum to
/// the total. The reported energy is recomputed from the returned bits
/// against the original qubo.
struct SolveReport {
    Solution solution;
    double classical_seconds = 0.0;
    double embedding_seconds = 0.0;
    double quantum_seconds = 0.0;
    double total_seconds = 0.0;
    long long subproblems_solved = 0;
    bool timed_out = false;
    std::string solver_name;
    std::map<std::string, std::string> parameters;
};

enum class SolverKind { Random, Pcd, Fa, Qbsolv, Ich };
std::string to_string(SolverKind kind);
SolverKind solver_kind_from_string(const std::string& s);

enum class FreezeWeighting { Normalize, Multiply };

struct FaParams {
    int population_size = 250;
    int num_generations = 10;
    double crossover_rate = 0.9;
    double mutation_rate = 0.0;  // <= 0 selects 1/N
    int freeze_batch = 10;
    FreezeWeighting weighting = FreezeWeighting::Normalize;
};

struct QbParams {
    int num_repeats = 1;
    int subqubo_size = 0;  // <= 0 selects the backend capacity
    int tabu_tenure = 20;
};

/// Consensus value and freeze score per position of a population of equal
/// length bitstrings. The score is the per-position frequency of the
/// consensus value weighted by the population-wide frequency of that value
/// over all positions: divided by it (Normalize, so rare-but-unanimous values
/// rank high) or multiplied with it (Multiply).
struct FreezeScore {
    double score = 0.0;
    std::uint8_t consensus = 0;
};
std::vector<FreezeScore> fa_freeze_scores(const std::vector<std::vector<std::uint8_t>>& population,
                                          FreezeWeighting weighting);

/// Baseline: a uniformly random assignment.
SolveReport solve_random(const Qubo& qubo, std::uint64_t seed);

/// Principal component decomposition: spring layout + PCA ordering, recursive
/// median slicing until each slice embeds heuristically, sub-solves with cut
/// edges dropped, then single-bit greedy descent over cut-incident variables.
SolveReport solve_pcd(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                      std::uint64_t seed);

/// Freeze-and-anneal: a genetic algorithm evolves a population, then
/// consensus variables are iteratively frozen (with bias propagation) until
/// the residual fits the backend, which solves the remaining "hardest part".
SolveReport solve_fa(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                     const FaParams& params, std::uint64_t seed);

/// Qbsolv-style solver: impact-ranked sub-QUBOs clamped against the current
/// global solution and solved on the one cached clique embedding, interleaved
/// with tabu search over the full problem; stops after num_repeats
/// consecutive non-improving main-loop iterations.
SolveReport solve_qb(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                     const QbParams& params, std::uint64_t seed);

/// Iterative centrality halo: repeatedly solves the sub-QUBO on the highest
/// degree node and (a capped random sample of) its neighbors, writes the
/// result into the global solution and propagates its influence into the
/// remaining problem until the graph is consumed. Isolated nodes are set
/// classically by bias sign.
SolveReport solve_ich(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                      std::uint64_t seed);

}  // namespace qubobench
