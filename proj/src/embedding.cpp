#include "qubobench/embedding.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <stdexcept>

#include "qubobench/errors.hpp"
#include "qubobench/rng.hpp"

namespace qubobench {

namespace {

// K_5 on the single-cell C_1: three cross-shore pairs plus the two shores of
// unit 3 as singleton chains.
Embedding clique_embedding_c1(int n, const ChimeraTopology& topo) {
    Embedding emb;
    for (int v = 0; v < n; ++v) {
        if (v < 4)
            emb.chains.push_back({topo.qubit(0, 0, 0, v), topo.qubit(0, 0, 1, v)});
        else
            emb.chains.push_back({topo.qubit(0, 0, 1, 3)});
    }
    if (n == 5) emb.chains[3] = {topo.qubit(0, 0, 0, 3)};
    for (auto& c : emb.chains) std::sort(c.begin(), c.end());
    return emb;
}

}  // namespace

Embedding clique_embedding(int n, const ChimeraTopology& topo) {
    const int m = topo.m();
    if (n < 1) throw std::invalid_argument("clique_embedding: n must be positive");
    if (n > 4 * m + 1)
        throw CapacityExceeded("clique_embedding: K_" + std::to_string(n) +
                               " exceeds the C_" + std::to_string(m) + " clique minor bound");
    if (n == 1) return Embedding{{{topo.qubit(0, 0, 0, 0)}}};
    if (m == 1) return clique_embedding_c1(n, topo);

    // L-shaped chains with elbows on the diagonal of a t x t sub-grid: chain
    // (a, j) runs along row a for columns [0, a] on the horizontal shore and
    // down column a for rows [a, t-1] on the vertical shore. Chains of groups
    // a < b meet in cell (b, a); chains of the same group meet in their elbow
    // cell. Length is t + 1.
    const bool extra = (n == 4 * m + 1);
    const int ells = extra ? 4 * m : n;
    const int t = (ells + 3) / 4;

    Embedding emb;
    for (int v = 0; v < ells; ++v) {
        const int a = v / 4, j = v % 4;
        std::vector<int> chain;
        for (int c = 0; c <= a; ++c) chain.push_back(topo.qubit(a, c, 1, j));
        for (int r = a; r < t; ++r) chain.push_back(topo.qubit(r, a, 0, j));
        std::sort(chain.begin(), chain.end());
        emb.chains.push_back(std::move(chain));
    }

    if (extra) {
        // Collector chain for the (4m+1)-th variable: the superdiagonal cells
        // (c-1, c) hold, for every group a and unit k, a free qubit coupled by
        // a wire edge to either the top of chain (a, k)'s column segment or
        // the right end of its row segment. Consecutive superdiagonal cells
        // are linked through two qubits of cell (c-1, c+1).
        std::vector<int> chain;
        for (int c = 1; c < m; ++c) {
            for (int side = 0; side < 2; ++side)
                for (int u = 0; u < 4; ++u) chain.push_back(topo.qubit(c - 1, c, side, u));
            if (c + 1 < m) {
                chain.push_back(topo.qubit(c - 1, c + 1, 1, 0));
                chain.push_back(topo.qubit(c - 1, c + 1, 0, 0));
            }
        }
        std::sort(chain.begin(), chain.end());
        emb.chains.push_back(std::move(chain));
    }
    return emb;
}

bool validate_embedding(const Embedding& emb, const std::vector<std::vector<int>>& logical_adj,
                        const ChimeraTopology& topo, std::string* why) {
    auto fail = [why](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int n = static_cast<int>(logical_adj.size());
    if (static_cast<int>(emb.chains.size()) < n) return fail("missing chains");

    std::vector<int> owner(topo.num_qubits(), -1);
    for (int v = 0; v < n; ++v) {
        if (emb.chains[v].empty()) return fail("empty chain for variable " + std::to_string(v));
        for (int q : emb.chains[v]) {
            if (q < 0 || q >= topo.num_qubits()) return fail("qubit index out of range");
            if (owner[q] != -1) return fail("chains overlap at qubit " + std::to_string(q));
            owner[q] = v;
        }
    }

    // Chain connectivity within the topology.
    for (int v = 0; v < n; ++v) {
        const auto& chain = emb.chains[v];
        std::vector<char> seen(chain.size(), 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!queue.empty()) {
            const int at = queue.front();
            queue.pop_front();
            for (std::size_t other = 0; other < chain.size(); ++other) {
                if (!seen[other] && topo.has_edge(chain[at], chain[other])) {
                    seen[other] = 1;
                    ++reached;
                    queue.push_back(static_cast<int>(other));
                }
            }
        }
        if (reached != chain.size())
            return fail("chain of variable " + std::to_string(v) + " is disconnected");
    }

    // Every logical coupling must be carried by at least one hardware edge.
    for (int v = 0; v < n; ++v) {
        for (int u : logical_adj[v]) {
            if (u <= v) continue;
            bool found = false;
            for (int p : emb.chains[v]) {
                for (int q : emb.chains[u])
                    if (topo.has_edge(p, q)) {
                        found = true;
                        break;
                    }
                if (found) break;
            }
            if (!found)
                return fail("no hardware edge for logical coupling (" + std::to_string(v) + "," +
                            std::to_string(u) + ")");
        }
    }
    return true;
}

namespace {

struct GrowState {
    std::vector<std::vector<int>> topo_adj;
    std::vector<int> owner;  // -1 free
    std::vector<std::vector<int>> chains;

    GrowState(const ChimeraTopology& t, int n) : owner(t.num_qubits(), -1), chains(n) {
        topo_adj.reserve(t.num_qubits());
        for (int q = 0; q < t.num_qubits(); ++q) topo_adj.push_back(t.neighbors(q));
    }

    void assign(int q, int var) {
        owner[q] = var;
        chains[var].push_back(q);
    }

    // Crowding cost of standing on a qubit: paths prefer open space so
    // placed chains keep free boundary for later connections.
    double crowd(int q) const {
        int owned = 0;
        for (int nb : topo_adj[q])
            if (owner[nb] != -1) ++owned;
        return 1.0 + owned;
    }

    bool chains_touch(int v, int t) const {
        for (int q : chains[v])
            for (int nb : topo_adj[q])
                if (owner[nb] == t) return true;
        return false;
    }
};

// Places the chain of v as a root of a new component: a sampled free qubit
// with as much open space around it as possible.
bool place_root(GrowState& st, int v, Rng& rng) {
    std::vector<int> free;
    for (std::size_t q = 0; q < st.owner.size(); ++q)
        if (st.owner[q] == -1) free.push_back(static_cast<int>(q));
    if (free.empty()) return false;
    int best = -1, best_degree = -1;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const int q = free[rng.next_u64() % free.size()];
        int degree = 0;
        for (int nb : st.topo_adj[q])
            if (st.owner[nb] == -1) ++degree;
        if (degree > best_degree) {
            best = q;
            best_degree = degree;
        }
    }
    st.assign(best, v);
    return true;
}

// Connects chain v to chain t through a cheapest free path. The path is
// split between the two chains (the target half extends t), so chains of
// high-degree variables grow enough boundary to accept later connections.
bool connect(GrowState& st, int v, int t, Rng& rng) {
    if (!st.chains[v].empty() && st.chains_touch(v, t)) return true;

    std::vector<char> target(st.owner.size(), 0);
    for (int q : st.chains[t])
        for (int nb : st.topo_adj[q])
            if (st.owner[nb] == -1) target[nb] = 1;

    constexpr double kUnreached = -1.0;
    std::vector<double> dist(st.owner.size(), kUnreached);
    std::vector<int> parent(st.owner.size(), -1);
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;

    if (st.chains[v].empty()) {
        // First placement of v: any free qubit adjacent to t can seed it.
        int start = -1;
        double start_cost = 0.0;
        std::uint64_t seen = 0;
        for (std::size_t q = 0; q < target.size(); ++q) {
            if (!target[q]) continue;
            const double cost = st.crowd(static_cast<int>(q));
            ++seen;
            if (start == -1 || cost < start_cost ||
                (cost == start_cost && rng.next_u64() % seen == 0)) {
                start = static_cast<int>(q);
                start_cost = cost;
            }
        }
        if (start == -1) return false;
        st.assign(start, v);
        return true;
    }

    for (int q : st.chains[v]) {
        dist[q] = 0.0;
        queue.push({0.0, q});
    }
    int found = -1;
    while (!queue.empty()) {
        const auto [d, at] = queue.top();
        queue.pop();
        if (d != dist[at]) continue;
        if (target[at] && st.owner[at] == -1) {
            found = at;
            break;
        }
        for (int nb : st.topo_adj[at]) {
            if (st.owner[nb] != -1) continue;
            const double nd = d + st.crowd(nb);
            if (dist[nb] == kUnreached || nd < dist[nb]) {
                dist[nb] = nd;
                parent[nb] = at;
                queue.push({nd, nb});
            }
        }
    }
    if (found == -1) return false;

    std::vector<int> path;  // found (adjacent to t) back towards v's chain
    for (int q = found; q != -1 && st.owner[q] == -1; q = parent[q]) path.push_back(q);
    const std::size_t to_target = path.size() / 2;
    for (std::size_t i = 0; i < path.size(); ++i)
        st.assign(path[i], i < to_target ? t : v);
    return true;
}

}  // namespace

std::optional<Embedding> heuristic_embed(const std::vector<std::vector<int>>& logical_adj,
                                         const ChimeraTopology& topo, int effort,
                                         std::uint64_t seed) {
    if (effort < 1) throw std::invalid_argument("heuristic_embed: effort must be at least 1");
    const int n = static_cast<int>(logical_adj.size());
    if (n == 0) return Embedding{};

    for (int restart = 0; restart < effort; ++restart) {
        Rng rng(mix_seed(seed, restart));

        // Randomized BFS order over the logical graph keeps consecutive
        // placements adjacent, so chains stay short and compact.
        std::vector<int> order;
        order.reserve(n);
        std::vector<char> visited(n, 0);
        std::vector<int> roots(n);
        for (int i = 0; i < n; ++i) roots[i] = i;
        rng.shuffle(roots);
        std::deque<int> frontier;
        for (int root : roots) {
            if (visited[root]) continue;
            visited[root] = 1;
            frontier.push_back(root);
            while (!frontier.empty()) {
                const int v = frontier.front();
                frontier.pop_front();
                order.push_back(v);
                std::vector<int> nbrs = logical_adj[v];
                rng.shuffle(nbrs);
                for (int u : nbrs)
                    if (!visited[u]) {
                        visited[u] = 1;
                        frontier.push_back(u);
                    }
            }
        }

        GrowState st(topo, n);
        bool ok = true;
        for (int v : order) {
            std::vector<int> targets;
            for (int u : logical_adj[v])
                if (!st.chains[u].empty()) targets.push_back(u);
            if (targets.empty()) {
                ok = place_root(st, v, rng);
            } else {
                for (int t : targets)
                    if (!(ok = connect(st, v, t, rng))) break;
            }
            if (!ok) break;
        }
        if (!ok) continue;
        for (auto& chain : st.chains) std::sort(chain.begin(), chain.end());
        Embedding emb{std::move(st.chains)};
        if (validate_embedding(emb, logical_adj, topo)) return emb;
    }
    return std::nullopt;
}

double auto_chain_strength(const Qubo& logical) { return 1.0 + logical.max_abs_coefficient(); }

Qubo embed_qubo(const Qubo& logical, const Embedding& emb, double chain_strength,
                const ChimeraTopology& topo) {
    const int n = logical.num_vars();
    if (static_cast<int>(emb.chains.size()) < n)
        throw InvalidEmbedding("embed_qubo: embedding does not cover all variables");
    for (int v = 0; v < n; ++v)
        if (emb.chains[v].empty()) throw InvalidEmbedding("embed_qubo: empty chain");

    Qubo hw(topo.num_qubits(), logical.offset());

    for (const auto& [i, a] : logical.linear_terms()) {
        const auto& chain = emb.chains[i];
        const double share = a / static_cast<double>(chain.size());
        for (int q : chain) hw.add_linear(q, share);
    }

    for (const auto& [key, b] : logical.quadratic_terms()) {
        const auto& ci = emb.chains[key.first];
        const auto& cj = emb.chains[key.second];
        std::pair<int, int> best{-1, -1};
        for (int p : ci)
            for (int q : cj) {
                if (!topo.has_edge(p, q)) continue;
                std::pair<int, int> cand{std::min(p, q), std::max(p, q)};
                if (best.first == -1 || cand < best) best = cand;
            }
        if (best.first == -1)
            throw InvalidEmbedding("embed_qubo: no hardware edge for a logical coupling");
        hw.add_quadratic(best.first, best.second, b);
    }

    // Chain agreement: for every spanning-tree edge (p, q) of a chain, add the
    // QUBO penalty s*(x_p - x_q)^2 = s*x_p + s*x_q - 2*s*x_p*x_q, which costs
    // s whenever the two qubits disagree and nothing when they agree.
    for (int v = 0; v < n; ++v) {
        const auto& chain = emb.chains[v];
        if (chain.size() < 2) continue;
        std::vector<char> seen(chain.size(), 0);
        std::deque<int> queue{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!queue.empty()) {
            const int at = queue.front();
            queue.pop_front();
            for (std::size_t other = 0; other < chain.size(); ++other) {
                if (seen[other] || !topo.has_edge(chain[at], chain[other])) continue;
                seen[other] = 1;
                ++reached;
                queue.push_back(static_cast<int>(other));
                hw.add_linear(chain[at], chain_strength);
                hw.add_linear(chain[other], chain_strength);
                hw.add_quadratic(chain[at], chain[other], -2.0 * chain_strength);
            }
        }
        if (reached != chain.size()) throw InvalidEmbedding("embed_qubo: disconnected chain");
    }
    return hw;
}

std::vector<Solution> unembed(const std::vector<std::vector<std::uint8_t>>& reads,
                              const Embedding& emb, const Qubo& logical) {
    const int n = logical.num_vars();
    std::vector<Solution> out;
    out.reserve(reads.size());
    for (const auto& read : reads) {
        std::vector<std::uint8_t> bits(n, 0);
        for (int v = 0; v < n; ++v) {
            std::size_t ones = 0;
            for (int q : emb.chains[v]) ones += read[q];
            bits[v] = (2 * ones > emb.chains[v].size()) ? 1 : 0;
        }
        const double e = logical.energy(bits);
        out.push_back({std::move(bits), e});
    }
    return out;
}

}  // namespace qubobench
