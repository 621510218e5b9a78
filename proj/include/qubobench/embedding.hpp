#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qubobench/chimera.hpp"
#include "qubobench/qubo.hpp"

namespace qubobench {

/// Minor embedding: each logical variable maps to a chain of hardware qubits.
struct Embedding {
    std::vector<std::vector<int>> chains;  // per variable, sorted qubit indices
};

/// Checks the embedding invariants against a logical adjacency structure:
/// chains are non-empty, pairwise disjoint and connected in the topology, and
/// every logical edge is realized by at least one hardware edge between the
/// two chains. On failure `why`, if given, receives a reason.
bool validate_embedding(const Embedding& emb, const std::vector<std::vector<int>>& logical_adj,
                        const ChimeraTopology& topo, std::string* why = nullptr);

/// Deterministic embedding of the complete graph K_n. Chains have length at
/// most ceil(n/4)+1 for n <= 4m; the final chain of the n = 4m+1 embedding is
/// a longer collector running along the superdiagonal. Throws
/// CapacityExceeded for n > 4m+1.
Embedding clique_embedding(int n, const ChimeraTopology& topo);

/// Randomized chain-growth embedder: places variables in random order,
/// growing each chain along shortest free paths towards the chains of its
/// already-placed neighbors, with up to `effort` rip-up-and-retry restarts.
/// Every returned embedding has passed validate_embedding; nullopt after
/// `effort` failed restarts (which does not prove non-embeddability).
std::optional<Embedding> heuristic_embed(const std::vector<std::vector<int>>& logical_adj,
                                         const ChimeraTopology& topo, int effort,
                                         std::uint64_t seed);

/// 1 + max |coefficient| of the logical problem.
double auto_chain_strength(const Qubo& logical);

/// Maps a logical qubo onto hardware. Logical biases split uniformly over
/// chain qubits; each logical coupling lands on the lowest-index hardware
/// edge between the two chains; chain agreement penalties are placed on a
/// spanning tree of each chain.
Qubo embed_qubo(const Qubo& logical, const Embedding& emb, double chain_strength,
                const ChimeraTopology& topo);

/// Majority-vote chain repair: per logical variable takes the majority bit
/// over its chain (exact ties resolve to 0) and re-evaluates against the
/// logical qubo.
std::vector<Solution> unembed(const std::vector<std::vector<std::uint8_t>>& reads,
                              const Embedding& emb, const Qubo& logical);

}  // namespace qubobench
