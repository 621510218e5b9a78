#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qubobench/annealer.hpp"
#include "qubobench/chimera.hpp"
#include "qubobench/embedding.hpp"
#include "qubobench/errors.hpp"
#include "qubobench/rng.hpp"
#include "test_util.hpp"

using namespace qubobench;

namespace {

std::vector<std::vector<int>> complete_graph(int n) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) adj[i].push_back(j);
    return adj;
}

// Drops the untouched variables of a hardware-sized qubo so the exhaustive
// solver can enumerate it.
std::pair<Qubo, std::vector<int>> compact(const Qubo& q) {
    const auto vars = q.active_variables();
    std::vector<int> local(q.num_vars(), -1);
    for (std::size_t i = 0; i < vars.size(); ++i) local[vars[i]] = static_cast<int>(i);
    Qubo out(static_cast<int>(vars.size()), q.offset());
    for (const auto& [i, a] : q.linear_terms()) out.add_linear(local[i], a);
    for (const auto& [key, b] : q.quadratic_terms())
        out.add_quadratic(local[key.first], local[key.second], b);
    return {std::move(out), vars};
}

}  // namespace

TEST_CASE("chimera topology structure") {
    const ChimeraTopology c16(16);
    CHECK(c16.num_qubits() == 2048);
    CHECK(c16.max_clique_minor() == 65);

    const ChimeraTopology c2(2);
    CHECK(c2.num_qubits() == 32);
    for (int q = 0; q < c2.num_qubits(); ++q) {
        const auto nbrs = c2.neighbors(q);
        CHECK(nbrs.size() <= 6);
        for (int nb : nbrs) {
            CHECK(c2.has_edge(q, nb));
            CHECK(c2.has_edge(nb, q));
        }
    }
    // neighbors() and edges() describe the same graph
    std::size_t degree_sum = 0;
    for (int q = 0; q < c2.num_qubits(); ++q) degree_sum += c2.neighbors(q).size();
    CHECK(degree_sum == 2 * c2.edges().size());

    CHECK_THROWS_AS(ChimeraTopology(0), std::invalid_argument);
}

TEST_CASE("clique embedding validates across sizes and grids") {
    for (int m : {1, 2, 4}) {
        const ChimeraTopology topo(m);
        for (int n = 1; n <= 4 * m + 1; ++n) {
            const Embedding emb = clique_embedding(n, topo);
            REQUIRE(static_cast<int>(emb.chains.size()) == n);
            std::string why;
            const bool ok = validate_embedding(emb, complete_graph(n), topo, &why);
            INFO("m=", m, " n=", n, " why=", why);
            CHECK(ok);
            if (n <= 4 * m)
                for (const auto& chain : emb.chains)
                    CHECK(static_cast<int>(chain.size()) <= m + 1);
        }
        CHECK_THROWS_AS(clique_embedding(4 * m + 2, topo), CapacityExceeded);
    }
    CHECK_THROWS_AS(clique_embedding(0, ChimeraTopology(2)), std::invalid_argument);
}

TEST_CASE("clique embedding K_65 on C_16") {
    const ChimeraTopology topo(16);
    const Embedding emb = clique_embedding(65, topo);
    std::string why;
    CHECK(validate_embedding(emb, complete_graph(65), topo, &why));
    INFO(why);
    // A single chain of one qubit for K_1.
    CHECK(clique_embedding(1, topo).chains[0].size() == 1);
    // The 64 native chains stay at length m+1.
    for (int v = 0; v < 64; ++v) CHECK(emb.chains[v].size() == 17);
}

TEST_CASE("validator rejects broken embeddings") {
    const ChimeraTopology topo(2);
    Embedding emb = clique_embedding(4, topo);
    const auto k4 = complete_graph(4);
    CHECK(validate_embedding(emb, k4, topo));

    Embedding overlapping = emb;
    overlapping.chains[0].push_back(overlapping.chains[1][0]);
    CHECK(!validate_embedding(overlapping, k4, topo));

    Embedding disconnected = emb;
    disconnected.chains[0] = {topo.qubit(0, 0, 0, 0), topo.qubit(1, 1, 0, 0)};
    CHECK(!validate_embedding(disconnected, k4, topo));

    Embedding missing = emb;
    missing.chains[3].clear();
    CHECK(!validate_embedding(missing, k4, topo));
}

TEST_CASE("heuristic embedding") {
    const ChimeraTopology c16(16);

    std::vector<std::vector<int>> cycle4{{1, 3}, {0, 2}, {1, 3}, {0, 2}};
    const auto emb = heuristic_embed(cycle4, c16, 3, 1);
    REQUIRE(emb.has_value());
    CHECK(validate_embedding(*emb, cycle4, c16));

    // A complete graph beyond the clique minor bound can never validate.
    CHECK(!heuristic_embed(complete_graph(66), c16, 5, 1).has_value());

    // Every returned embedding must pass the validator; most attempts at
    // this density should succeed.
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed + 1000);
        std::vector<std::vector<int>> adj(30);
        for (int i = 0; i < 30; ++i)
            for (int j = i + 1; j < 30; ++j)
                if (rng.bernoulli(0.2)) {
                    adj[i].push_back(j);
                    adj[j].push_back(i);
                }
        for (auto& row : adj) std::sort(row.begin(), row.end());
        const auto result = heuristic_embed(adj, c16, 8, seed);
        if (result) {
            ++successes;
            CHECK(validate_embedding(*result, adj, c16));
        }
    }
    CHECK(successes >= 18);

    CHECK_THROWS_AS(heuristic_embed(cycle4, c16, 0, 1), std::invalid_argument);
}

TEST_CASE("embed_qubo on single-qubit chains keeps coefficients") {
    const ChimeraTopology topo(2);

    Qubo single(1);
    single.add_linear(0, -1.5);
    Embedding e1{{{topo.qubit(0, 0, 0, 0)}}};
    const Qubo hw1 = embed_qubo(single, e1, 2.0, topo);
    CHECK(hw1.linear(topo.qubit(0, 0, 0, 0)) == -1.5);
    CHECK(hw1.num_couplings() == 0);

    Qubo pair(2);
    pair.add_linear(0, 0.5);
    pair.add_linear(1, -0.25);
    pair.add_quadratic(0, 1, 0.75);
    Embedding e2{{{topo.qubit(0, 0, 0, 0)}, {topo.qubit(0, 0, 1, 0)}}};
    const Qubo hw2 = embed_qubo(pair, e2, 2.0, topo);
    CHECK(hw2.linear(topo.qubit(0, 0, 0, 0)) == 0.5);
    CHECK(hw2.linear(topo.qubit(0, 0, 1, 0)) == -0.25);
    CHECK(hw2.quadratic(topo.qubit(0, 0, 0, 0), topo.qubit(0, 0, 1, 0)) == 0.75);
    CHECK(hw2.num_couplings() == 1);
}

TEST_CASE("hardware optimum unembeds to the logical optimum on 2-qubit chains") {
    const ChimeraTopology topo(2);
    const Qubo logical = test::random_dyadic_qubo(3, 1.0, 11);
    const Embedding emb = clique_embedding(3, topo);
    for (const auto& chain : emb.chains) CHECK(chain.size() >= 2);

    const Qubo hw = embed_qubo(logical, emb, auto_chain_strength(logical), topo);
    const auto [compact_hw, vars] = compact(hw);
    const Solution hw_best = exact_solve(compact_hw);

    std::vector<std::uint8_t> full(hw.num_vars(), 0);
    for (std::size_t i = 0; i < vars.size(); ++i) full[vars[i]] = hw_best.bits[i];
    const auto logical_solutions = unembed({full}, emb, logical);
    const Solution logical_best = exact_solve(logical);
    CHECK(logical_solutions[0].energy == logical_best.energy);

    // With chain strength at or above the auto value, the hardware ground
    // state has no broken chains.
    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        const auto& chain = emb.chains[v];
        for (int q : chain) CHECK(full[q] == full[chain[0]]);
    }

    const Qubo hw2 = embed_qubo(logical, emb, 2.0 * auto_chain_strength(logical), topo);
    const auto [compact_hw2, vars2] = compact(hw2);
    const Solution hw2_best = exact_solve(compact_hw2);
    std::vector<std::uint8_t> full2(hw2.num_vars(), 0);
    for (std::size_t i = 0; i < vars2.size(); ++i) full2[vars2[i]] = hw2_best.bits[i];
    for (const auto& chain : emb.chains)
        for (int q : chain) CHECK(full2[q] == full2[chain[0]]);
}

TEST_CASE("embed_qubo rejects coverage gaps") {
    const ChimeraTopology topo(2);
    Qubo q(2);
    q.add_quadratic(0, 1, 1.0);
    Embedding missing{{{topo.qubit(0, 0, 0, 0)}}};
    CHECK_THROWS_AS(embed_qubo(q, missing, 1.0, topo), InvalidEmbedding);

    // Chains with no connecting hardware edge.
    Embedding disjoint{{{topo.qubit(0, 0, 0, 0)}, {topo.qubit(1, 1, 0, 0)}}};
    CHECK_THROWS_AS(embed_qubo(q, disjoint, 1.0, topo), InvalidEmbedding);
}

TEST_CASE("unembed majority voting") {
    const ChimeraTopology topo(2);
    Qubo q(1);
    q.add_linear(0, 1.0);

    Embedding emb{{{0, 4, 8}}};
    std::vector<std::uint8_t> read(topo.num_qubits(), 0);
    read[0] = read[4] = read[8] = 1;
    CHECK(unembed({read}, emb, q)[0].bits[0] == 1);

    read[8] = 0;  // 2 of 3 agree
    CHECK(unembed({read}, emb, q)[0].bits[0] == 1);

    Embedding even{{{0, 4}}};
    std::vector<std::uint8_t> tie(topo.num_qubits(), 0);
    tie[0] = 1;  // exact tie resolves to 0
    CHECK(unembed({tie}, even, q)[0].bits[0] == 0);
}

TEST_CASE("auto chain strength") {
    Qubo q(2);
    q.add_linear(0, -3.0);
    q.add_quadratic(0, 1, 2.0);
    CHECK(auto_chain_strength(q) == 4.0);
}
