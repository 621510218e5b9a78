#include "qubobench/problems.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qubobench/errors.hpp"
#include "qubobench/rng.hpp"

namespace qubobench {

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::Dbg: return "dbg";
        case ProblemKind::Tsp: return "tsp";
        case ProblemKind::Sca: return "sca";
        case ProblemKind::Mwp: return "mwp";
    }
    return "?";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "dbg") return ProblemKind::Dbg;
    if (s == "tsp") return ProblemKind::Tsp;
    if (s == "sca") return ProblemKind::Sca;
    if (s == "mwp") return ProblemKind::Mwp;
    throw std::invalid_argument("unknown problem kind: " + s);
}

bool quality_is_maximized(ProblemKind kind) { return kind != ProblemKind::Tsp; }

// ---------------------------------------------------------------------------
// DBG
// ---------------------------------------------------------------------------

ProblemInstance gen_dbg(const DbgParams& params, std::uint64_t seed) {
    if (params.number_of_layers < 1 || params.nodes_per_layer < 1)
        throw std::invalid_argument("gen_dbg: layers and nodes per layer must be positive");
    if (params.connectivity_probability < 0.0 || params.connectivity_probability > 1.0)
        throw std::invalid_argument("gen_dbg: connectivity probability outside [0, 1]");
    if (params.max_connectivity_range_layer < 0)
        throw std::invalid_argument("gen_dbg: negative connectivity range");

    const int n = params.number_of_layers * params.nodes_per_layer;
    Rng rng(seed);

    DbgMeta meta;
    static_cast<DbgParams&>(meta) = params;
    meta.award.resize(n);
    for (int i = 0; i < n; ++i)
        meta.award[i] = params.optimization_type == AwardMode::Constant
                            ? params.average_node_value
                            : rng.uniform(0.0, 2.0 * params.average_node_value);

    Qubo qubo(n);
    for (int i = 0; i < n; ++i) qubo.add_linear(i, -meta.award[i]);
    for (int i = 0; i < n; ++i) {
        const int layer_i = i / params.nodes_per_layer;
        for (int j = i + 1; j < n; ++j) {
            const int layer_j = j / params.nodes_per_layer;
            if (layer_j - layer_i > params.max_connectivity_range_layer) break;
            if (rng.bernoulli(params.connectivity_probability)) qubo.add_quadratic(i, j, 1.0);
        }
    }

    return {std::move(qubo), ProblemKind::Dbg, seed, std::move(meta)};
}

long long count_broken_dbg(const Qubo& qubo, std::span<const std::uint8_t> bits) {
    long long broken = 0;
    for (const auto& [key, b] : qubo.quadratic_terms()) {
        (void)b;
        if (bits[key.first] && bits[key.second]) ++broken;
    }
    return broken;
}

std::vector<std::uint8_t> repair_dbg(const Qubo& qubo, const DbgMeta& meta,
                                     std::span<const std::uint8_t> bits) {
    // Minimal reconciliation: deactivate nodes until no coupling is active,
    // dropping the less valuable endpoint of each violated coupling. The
    // solution is otherwise left as the solver produced it.
    std::vector<std::uint8_t> out(bits.begin(), bits.end());
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [key, b] : qubo.quadratic_terms()) {
            (void)b;
            if (!out[key.first] || !out[key.second]) continue;
            out[meta.award[key.first] <= meta.award[key.second] ? key.first : key.second] = 0;
            changed = true;
        }
    }
    return out;
}

double dbg_quality(const DbgMeta& meta, std::span<const std::uint8_t> bits) {
    double total = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) total += meta.award[i];
    return total;
}

// ---------------------------------------------------------------------------
// TSP
// ---------------------------------------------------------------------------

double TspMeta::max_distance() const {
    double m = 0.0;
    for (double d : distances) m = std::max(m, d);
    return m;
}

std::vector<double> gen_tsp_random(int n, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("gen_tsp_random: need at least 3 vertices");
    Rng rng(seed);
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double w = rng.uniform(1.0, 10.0);
            d[static_cast<std::size_t>(i) * n + j] = w;
            d[static_cast<std::size_t>(j) * n + i] = w;
        }
    return d;
}

TspMeta make_tsp_meta(int n, std::vector<double> distances) {
    TspMeta meta;
    meta.n = n;
    meta.distances = std::move(distances);
    meta.penalty_b = 1.0;
    meta.penalty_a = 2.0 * n * meta.max_distance();
    return meta;
}

ProblemInstance tsp_to_qubo(TspMeta meta, std::uint64_t seed) {
    const int n = meta.n;
    if (n < 3) throw std::invalid_argument("tsp_to_qubo: need at least 3 vertices");
    if (static_cast<int>(meta.distances.size()) != n * n)
        throw std::invalid_argument("tsp_to_qubo: distance matrix size mismatch");
    if (!(meta.penalty_a > meta.penalty_b * meta.max_distance()))
        throw InvalidPenalty("tsp_to_qubo: penalty_a must exceed penalty_b * max distance");

    const double a = meta.penalty_a, b = meta.penalty_b;
    auto var = [n](int v, int p) { return v * n + p; };

    // A * sum_v (1 - sum_p x_{v,p})^2 + A * sum_p (1 - sum_v x_{v,p})^2
    //   + B * sum_{u != v} d(u,v) sum_p x_{u,p} x_{v,p+1}
    // expanded exactly; the squared one-hot terms contribute the constant 2nA.
    Qubo qubo(n * n, 2.0 * n * a);
    for (int v = 0; v < n; ++v)
        for (int p = 0; p < n; ++p) qubo.add_linear(var(v, p), -2.0 * a);
    for (int v = 0; v < n; ++v)
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) qubo.add_quadratic(var(v, p), var(v, q), 2.0 * a);
    for (int p = 0; p < n; ++p)
        for (int v = 0; v < n; ++v)
            for (int w = v + 1; w < n; ++w) qubo.add_quadratic(var(v, p), var(w, p), 2.0 * a);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            const double d = meta.distance(u, v);
            if (d == 0.0) continue;
            for (int p = 0; p < n; ++p) qubo.add_quadratic(var(u, p), var(v, (p + 1) % n), b * d);
        }

    return {std::move(qubo), ProblemKind::Tsp, seed, std::move(meta)};
}

long long count_broken_tsp(const TspMeta& meta, std::span<const std::uint8_t> bits) {
    const int n = meta.n;
    if (static_cast<int>(bits.size()) != n * n)
        throw std::invalid_argument("count_broken_tsp: solution length mismatch");
    long long broken = 0;
    for (int v = 0; v < n; ++v) {
        int count = 0;
        for (int p = 0; p < n; ++p) count += bits[v * n + p];
        if (count != 1) ++broken;
    }
    for (int p = 0; p < n; ++p) {
        int count = 0;
        for (int v = 0; v < n; ++v) count += bits[v * n + p];
        if (count != 1) ++broken;
    }
    return broken;
}

std::optional<std::vector<int>> decode_tsp(const TspMeta& meta,
                                           std::span<const std::uint8_t> bits) {
    if (count_broken_tsp(meta, bits) != 0) return std::nullopt;
    std::vector<int> tour(meta.n, -1);
    for (int p = 0; p < meta.n; ++p)
        for (int v = 0; v < meta.n; ++v)
            if (bits[v * meta.n + p]) tour[p] = v;
    return tour;
}

std::vector<int> repair_tsp(const TspMeta& meta, std::span<const std::uint8_t> bits) {
    const int n = meta.n;
    if (static_cast<int>(bits.size()) != n * n)
        throw std::invalid_argument("repair_tsp: solution length mismatch");

    std::vector<int> tour(n, -1);
    std::vector<char> used(n, 0);

    // Keep one claimant per position: the lexicographically smallest vertex
    // claiming the position that is not already placed elsewhere.
    for (int p = 0; p < n; ++p) {
        for (int v = 0; v < n; ++v) {
            if (bits[v * n + p] && !used[v]) {
                tour[p] = v;
                used[v] = 1;
                break;
            }
        }
    }

    // Fill the remaining positions greedily by minimum added edge length
    // against already-assigned cyclic neighbors.
    for (int p = 0; p < n; ++p) {
        if (tour[p] != -1) continue;
        const int prev = tour[(p + n - 1) % n];
        const int next = tour[(p + 1) % n];
        int pick = -1;
        double pick_cost = 0.0;
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            double cost = 0.0;
            if (prev != -1) cost += meta.distance(prev, v);
            if (next != -1) cost += meta.distance(v, next);
            if (pick == -1 || cost < pick_cost) {
                pick = v;
                pick_cost = cost;
            }
        }
        tour[p] = pick;
        used[pick] = 1;
    }
    return tour;
}

double tour_length(const TspMeta& meta, const std::vector<int>& tour) {
    double total = 0.0;
    for (std::size_t p = 0; p < tour.size(); ++p)
        total += meta.distance(tour[p], tour[(p + 1) % tour.size()]);
    return total;
}

// ---------------------------------------------------------------------------
// SCA
// ---------------------------------------------------------------------------

bool ScaMeta::disjoint(int a, int b) const {
    const auto& sa = nodes[a].satellites;
    const auto& sb = nodes[b].satellites;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) return false;
        if (sa[i] < sb[j]) ++i;
        else ++j;
    }
    return true;
}

namespace {

void enumerate_subsets(int n, int size, std::vector<int>& current,
                       std::vector<std::vector<int>>& out, int start) {
    if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
    }
    for (int s = start; s < n; ++s) {
        current.push_back(s);
        enumerate_subsets(n, size, current, out, s + 1);
        current.pop_back();
    }
}

}  // namespace

ProblemInstance gen_sca(const ScaGenParams& params, std::uint64_t seed) {
    if (params.k < 2) throw std::invalid_argument("gen_sca: k must be at least 2");
    if (params.allowed_sizes.empty()) throw std::invalid_argument("gen_sca: no allowed sizes");
    if (params.threshold_percentile < 0.0 || params.threshold_percentile >= 100.0)
        throw std::invalid_argument("gen_sca: percentile must lie in [0, 100)");

    std::vector<int> sizes = params.allowed_sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    std::vector<std::vector<int>> subsets;
    for (int size : sizes) {
        if (size < 1 || size > params.n_satellites)
            throw std::invalid_argument("gen_sca: sub-constellation size out of range");
        std::vector<int> current;
        enumerate_subsets(params.n_satellites, size, current, subsets, 0);
    }

    Rng rng(seed);
    std::vector<double> weight(subsets.size());
    for (auto& w : weight) w = rng.next_double();

    // Nearest-rank percentile threshold over the synthetic coverage values.
    std::vector<double> sorted = weight;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t cut =
        static_cast<std::size_t>(params.threshold_percentile / 100.0 * sorted.size());
    const double threshold = sorted[cut];

    ScaMeta meta;
    meta.n_satellites = params.n_satellites;
    meta.k = params.k;
    for (std::size_t i = 0; i < subsets.size(); ++i)
        if (weight[i] >= threshold) meta.nodes.push_back({std::move(subsets[i]), weight[i]});

    const int n = static_cast<int>(meta.nodes.size());
    if (n < params.k)
        throw InfeasibleInstance("gen_sca: fewer surviving nodes than the clique size target");

    std::vector<double> top;
    for (const auto& node : meta.nodes) top.push_back(node.weight);
    std::sort(top.begin(), top.end(), std::greater<>());
    double top_sum = 0.0;
    for (int i = 0; i < params.k; ++i) top_sum += top[i];
    const double penalty = 1.0 + top_sum;
    meta.penalty = penalty;

    // -w_v per node; P added for selecting overlapping (non-adjacent) pairs;
    // P * (sum x - k)^2 drives the selection count to exactly k.
    Qubo qubo(n, penalty * params.k * params.k);
    for (int v = 0; v < n; ++v) {
        qubo.add_linear(v, -meta.nodes[v].weight);
        qubo.add_linear(v, penalty * (1.0 - 2.0 * params.k));
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            double coupling = 2.0 * penalty;
            if (!meta.disjoint(a, b)) coupling += penalty;
            qubo.add_quadratic(a, b, coupling);
        }

    return {std::move(qubo), ProblemKind::Sca, seed, std::move(meta)};
}

long long count_broken_sca(const ScaMeta& meta, std::span<const std::uint8_t> bits) {
    std::vector<int> selected;
    for (std::size_t v = 0; v < bits.size(); ++v)
        if (bits[v]) selected.push_back(static_cast<int>(v));
    long long broken = 0;
    for (std::size_t i = 0; i < selected.size(); ++i)
        for (std::size_t j = i + 1; j < selected.size(); ++j)
            if (!meta.disjoint(selected[i], selected[j])) ++broken;
    broken += std::llabs(static_cast<long long>(selected.size()) - meta.k);
    return broken;
}

ScaRepairResult repair_sca(const ScaMeta& meta, std::span<const std::uint8_t> bits) {
    std::vector<int> sel;
    for (std::size_t v = 0; v < bits.size(); ++v)
        if (bits[v]) sel.push_back(static_cast<int>(v));

    // Drop the lowest-weight node involved in a conflict until clique.
    while (true) {
        std::vector<int> conflicts(sel.size(), 0);
        bool any = false;
        for (std::size_t i = 0; i < sel.size(); ++i)
            for (std::size_t j = i + 1; j < sel.size(); ++j)
                if (!meta.disjoint(sel[i], sel[j])) {
                    ++conflicts[i];
                    ++conflicts[j];
                    any = true;
                }
        if (!any) break;
        int drop = -1;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            if (conflicts[i] == 0) continue;
            if (drop == -1 || meta.nodes[sel[i]].weight < meta.nodes[sel[drop]].weight) drop = static_cast<int>(i);
        }
        sel.erase(sel.begin() + drop);
    }

    while (static_cast<int>(sel.size()) > meta.k) {
        int drop = 0;
        for (std::size_t i = 1; i < sel.size(); ++i)
            if (meta.nodes[sel[i]].weight < meta.nodes[sel[drop]].weight) drop = static_cast<int>(i);
        sel.erase(sel.begin() + drop);
    }

    ScaRepairResult out;
    std::vector<char> in_sel(meta.nodes.size(), 0);
    for (int v : sel) in_sel[v] = 1;
    while (static_cast<int>(sel.size()) < meta.k) {
        int add = -1;
        for (int v = 0; v < static_cast<int>(meta.nodes.size()); ++v) {
            if (in_sel[v]) continue;
            bool compatible = true;
            for (int u : sel)
                if (!meta.disjoint(u, v)) {
                    compatible = false;
                    break;
                }
            if (!compatible) continue;
            if (add == -1 || meta.nodes[v].weight > meta.nodes[add].weight) add = v;
        }
        if (add == -1) {
            out.shortfall = true;
            break;
        }
        sel.push_back(add);
        in_sel[add] = 1;
    }

    std::sort(sel.begin(), sel.end());
    out.selection = std::move(sel);
    for (int v : out.selection) out.coverage += meta.nodes[v].weight;
    return out;
}

// ---------------------------------------------------------------------------
// MWP
// ---------------------------------------------------------------------------

int MwpMeta::arrival_week(const MwpTriple& t) const {
    return t.start_week + facilities[t.facility].ship_weeks[repairs[t.repair].origin];
}

int MwpMeta::duration(const MwpTriple& t) const {
    return facilities[t.facility].duration_weeks[repairs[t.repair].type];
}

double MwpMeta::triple_cost(const MwpTriple& t) const {
    const auto& fac = facilities[t.facility];
    const auto& rep = repairs[t.repair];
    return fac.ship_cost[rep.origin] + fac.ship_cost[rep.destination] + fac.repair_cost[rep.type];
}

MwpMeta sample_mwp_meta(const MwpGenParams& params, std::uint64_t seed) {
    if (params.num_repairs < 1 || params.num_facilities < 1 || params.num_types < 1 ||
        params.num_weeks < 1 || params.num_locations < 1)
        throw std::invalid_argument("sample_mwp_meta: all counts must be positive");

    Rng rng(seed);
    MwpMeta meta;
    meta.num_weeks = params.num_weeks;
    meta.num_locations = params.num_locations;
    meta.num_types = params.num_types;

    for (int f = 0; f < params.num_facilities; ++f) {
        MwpFacility fac;
        fac.weekly_capacity_hours = rng.uniform(60.0, 100.0);
        for (int t = 0; t < params.num_types; ++t) {
            if (rng.bernoulli(0.8)) {
                fac.duration_weeks.push_back(rng.uniform_int(1, 3));
                fac.repair_cost.push_back(rng.uniform(10.0, 50.0));
                fac.hours_per_week.push_back(rng.uniform(20.0, 60.0));
            } else {
                fac.duration_weeks.push_back(-1);
                fac.repair_cost.push_back(0.0);
                fac.hours_per_week.push_back(0.0);
            }
        }
        for (int loc = 0; loc < params.num_locations; ++loc) {
            fac.ship_cost.push_back(rng.uniform(5.0, 20.0));
            fac.ship_weeks.push_back(rng.uniform_int(0, 2));
        }
        meta.facilities.push_back(std::move(fac));
    }

    // Every repair type must be offered somewhere.
    for (int t = 0; t < params.num_types; ++t) {
        bool offered = false;
        for (const auto& fac : meta.facilities)
            if (fac.duration_weeks[t] >= 0) offered = true;
        if (!offered) {
            auto& fac = meta.facilities[t % params.num_facilities];
            fac.duration_weeks[t] = rng.uniform_int(1, 3);
            fac.repair_cost[t] = rng.uniform(10.0, 50.0);
            fac.hours_per_week[t] = rng.uniform(20.0, 60.0);
        }
    }

    for (int r = 0; r < params.num_repairs; ++r) {
        MwpRepair rep;
        rep.origin = rng.uniform_int(0, params.num_locations - 1);
        rep.destination = rng.uniform_int(0, params.num_locations - 1);
        rep.type = rng.uniform_int(0, params.num_types - 1);
        rep.release_week = rng.uniform_int(0, std::max(0, params.num_weeks / 2 - 1));
        rep.value = rng.uniform(50.0, 150.0);

        int earliest = -1;
        for (const auto& fac : meta.facilities) {
            if (fac.duration_weeks[rep.type] < 0) continue;
            if (fac.hours_per_week[rep.type] > fac.weekly_capacity_hours) continue;
            const int done = rep.release_week + fac.ship_weeks[rep.origin] +
                             fac.duration_weeks[rep.type] + fac.ship_weeks[rep.destination];
            if (earliest == -1 || done < earliest) earliest = done;
        }
        if (earliest == -1 || earliest > params.num_weeks)
            throw InfeasibleInstance("sample_mwp_meta: a repair has no feasible schedule");
        rep.due_week = std::min(params.num_weeks, earliest + rng.uniform_int(0, std::max(0, params.num_weeks - earliest)));
        meta.repairs.push_back(rep);
    }
    return meta;
}

ProblemInstance gen_mwp(MwpMeta meta, std::array<double, 4> weights, std::uint64_t seed) {
    double max_value = 0.0;
    for (const auto& rep : meta.repairs) max_value = std::max(max_value, rep.value);
    if (weights == std::array<double, 4>{})
        weights = {10.0 * max_value, 10.0 * max_value, 1.0, 1.0};
    meta.constraint_weights = weights;
    const auto [w1, w2, w3, w4] = weights;

    meta.variable_index.clear();
    for (int r = 0; r < static_cast<int>(meta.repairs.size()); ++r) {
        const auto& rep = meta.repairs[r];
        for (int f = 0; f < static_cast<int>(meta.facilities.size()); ++f) {
            const auto& fac = meta.facilities[f];
            if (fac.duration_weeks[rep.type] < 0) continue;
            if (fac.hours_per_week[rep.type] > fac.weekly_capacity_hours) continue;
            for (int w = rep.release_week; w < meta.num_weeks; ++w) {
                const int arrival = w + fac.ship_weeks[rep.origin];
                const int done = arrival + fac.duration_weeks[rep.type] + fac.ship_weeks[rep.destination];
                if (done > rep.due_week || done > meta.num_weeks) continue;
                meta.variable_index.push_back({r, f, w});
            }
        }
    }

    const int n = static_cast<int>(meta.variable_index.size());
    std::vector<char> has_triple(meta.repairs.size(), 0);
    for (const auto& t : meta.variable_index) has_triple[t.repair] = 1;
    for (std::size_t r = 0; r < meta.repairs.size(); ++r)
        if (!has_triple[r])
            throw InfeasibleInstance("gen_mwp: repair " + std::to_string(r) + " has no feasible triple");

    Qubo qubo(n, w1 * static_cast<double>(meta.repairs.size()));
    for (int v = 0; v < n; ++v) {
        const auto& t = meta.variable_index[v];
        qubo.add_linear(v, -w1);
        qubo.add_linear(v, w3 * meta.triple_cost(t));
        qubo.add_linear(v, -w4 * meta.repairs[t.repair].value);
    }
    for (int v = 0; v < n; ++v)
        for (int u = v + 1; u < n; ++u) {
            const auto& tv = meta.variable_index[v];
            const auto& tu = meta.variable_index[u];
            if (tv.repair == tu.repair) qubo.add_quadratic(v, u, 2.0 * w1);
            if (tv.facility != tu.facility) continue;
            const auto& fac = meta.facilities[tv.facility];
            const double hv = fac.hours_per_week[meta.repairs[tv.repair].type];
            const double hu = fac.hours_per_week[meta.repairs[tu.repair].type];
            if (hv + hu <= fac.weekly_capacity_hours) continue;
            const int lo = std::max(meta.arrival_week(tv), meta.arrival_week(tu));
            const int hi = std::min(meta.arrival_week(tv) + meta.duration(tv),
                                    meta.arrival_week(tu) + meta.duration(tu));
            const int shared_weeks = hi - lo;
            if (shared_weeks > 0)
                qubo.add_quadratic(v, u,
                                   w2 * shared_weeks * (hv + hu - fac.weekly_capacity_hours));
        }

    return {std::move(qubo), ProblemKind::Mwp, seed, std::move(meta)};
}

double mwp_quality(const MwpMeta& meta, std::span<const std::uint8_t> bits) {
    const int n = static_cast<int>(meta.variable_index.size());
    if (static_cast<int>(bits.size()) != n)
        throw std::invalid_argument("mwp_quality: solution length mismatch");

    // Facility-week loads over all active triples.
    std::vector<std::vector<double>> load(meta.facilities.size(),
                                          std::vector<double>(meta.num_weeks + 1, 0.0));
    std::vector<int> schedules(meta.repairs.size(), 0);
    std::vector<int> chosen(meta.repairs.size(), -1);
    for (int v = 0; v < n; ++v) {
        if (!bits[v]) continue;
        const auto& t = meta.variable_index[v];
        ++schedules[t.repair];
        chosen[t.repair] = v;
        const auto& fac = meta.facilities[t.facility];
        const double hours = fac.hours_per_week[meta.repairs[t.repair].type];
        for (int w = meta.arrival_week(t); w < meta.arrival_week(t) + meta.duration(t); ++w)
            if (w <= meta.num_weeks) load[t.facility][w] += hours;
    }

    double quality = 0.0;
    for (std::size_t r = 0; r < meta.repairs.size(); ++r) {
        if (schedules[r] != 1) continue;
        const auto& t = meta.variable_index[chosen[r]];
        bool within_capacity = true;
        for (int w = meta.arrival_week(t); w < meta.arrival_week(t) + meta.duration(t); ++w)
            if (load[t.facility][w] > meta.facilities[t.facility].weekly_capacity_hours) {
                within_capacity = false;
                break;
            }
        if (within_capacity) quality += meta.repairs[r].value - meta.triple_cost(t);
    }
    return quality;
}

// ---------------------------------------------------------------------------

Evaluation evaluate_instance(const ProblemInstance& instance, std::span<const std::uint8_t> bits) {
    Evaluation out;
    switch (instance.kind) {
        case ProblemKind::Dbg: {
            out.broken = count_broken_dbg(instance.qubo, bits);
            const auto repaired = repair_dbg(instance.qubo, instance.dbg(), bits);
            out.fixed_quality = dbg_quality(instance.dbg(), repaired);
            break;
        }
        case ProblemKind::Tsp: {
            out.broken = count_broken_tsp(instance.tsp(), bits);
            const auto tour = repair_tsp(instance.tsp(), bits);
            out.fixed_quality = tour_length(instance.tsp(), tour);
            break;
        }
        case ProblemKind::Sca: {
            out.broken = count_broken_sca(instance.sca(), bits);
            const auto repaired = repair_sca(instance.sca(), bits);
            out.fixed_quality = repaired.coverage;
            out.shortfall = repaired.shortfall;
            break;
        }
        case ProblemKind::Mwp: {
            out.broken = std::nullopt;  // reported as N/A downstream
            out.fixed_quality = mwp_quality(instance.mwp(), bits);
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> parse_meta_lines(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("instance meta: missing '=' in line: " + line);
        auto trim = [](std::string s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
            return s;
        };
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

const std::string& require(const std::vector<std::pair<std::string, std::string>>& kv,
                           const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    throw std::invalid_argument("instance meta: missing key " + key);
}

}  // namespace

std::string instance_meta_to_text(const ProblemInstance& instance) {
    std::ostringstream out;
    out << "kind = " << to_string(instance.kind) << '\n';
    out << "seed = " << instance.seed << '\n';
    switch (instance.kind) {
        case ProblemKind::Dbg: {
            const auto& m = instance.dbg();
            out << "layers = " << m.number_of_layers << '\n';
            out << "nodes_per_layer = " << m.nodes_per_layer << '\n';
            out << "range = " << m.max_connectivity_range_layer << '\n';
            out << "probability = " << format_double(m.connectivity_probability) << '\n';
            out << "average_value = " << format_double(m.average_node_value) << '\n';
            out << "award_mode = " << (m.optimization_type == AwardMode::Constant ? "constant" : "random") << '\n';
            out << "award =";
            for (double a : m.award) out << ' ' << format_double(a);
            out << '\n';
            break;
        }
        case ProblemKind::Tsp: {
            const auto& m = instance.tsp();
            out << "n = " << m.n << '\n';
            out << "penalty_a = " << format_double(m.penalty_a) << '\n';
            out << "penalty_b = " << format_double(m.penalty_b) << '\n';
            for (int i = 0; i < m.n; ++i) {
                out << "row =";
                for (int j = 0; j < m.n; ++j) out << ' ' << format_double(m.distance(i, j));
                out << '\n';
            }
            break;
        }
        case ProblemKind::Sca: {
            const auto& m = instance.sca();
            out << "n_satellites = " << m.n_satellites << '\n';
            out << "k = " << m.k << '\n';
            out << "penalty = " << format_double(m.penalty) << '\n';
            for (const auto& node : m.nodes) {
                out << "node = " << format_double(node.weight) << " :";
                for (int s : node.satellites) out << ' ' << s;
                out << '\n';
            }
            break;
        }
        case ProblemKind::Mwp: {
            const auto& m = instance.mwp();
            out << "weeks = " << m.num_weeks << '\n';
            out << "locations = " << m.num_locations << '\n';
            out << "types = " << m.num_types << '\n';
            out << "weights =";
            for (double w : m.constraint_weights) out << ' ' << format_double(w);
            out << '\n';
            for (const auto& r : m.repairs)
                out << "repair = " << r.origin << ' ' << r.destination << ' ' << r.release_week
                    << ' ' << r.due_week << ' ' << r.type << ' ' << format_double(r.value) << '\n';
            for (const auto& f : m.facilities) {
                out << "facility = " << format_double(f.weekly_capacity_hours) << " :";
                for (int d : f.duration_weeks) out << ' ' << d;
                out << " :";
                for (double c : f.repair_cost) out << ' ' << format_double(c);
                out << " :";
                for (double h : f.hours_per_week) out << ' ' << format_double(h);
                out << " :";
                for (double c : f.ship_cost) out << ' ' << format_double(c);
                out << " :";
                for (int w : f.ship_weeks) out << ' ' << w;
                out << '\n';
            }
            for (const auto& t : m.variable_index)
                out << "triple = " << t.repair << ' ' << t.facility << ' ' << t.start_week << '\n';
            break;
        }
    }
    return out.str();
}

ProblemInstance instance_from_text(const std::string& qubo_text, const std::string& meta_text) {
    const auto kv = parse_meta_lines(meta_text);
    ProblemInstance inst;
    inst.qubo = Qubo::from_text(qubo_text);
    inst.kind = problem_kind_from_string(require(kv, "kind"));
    inst.seed = std::stoull(require(kv, "seed"));

    switch (inst.kind) {
        case ProblemKind::Dbg: {
            DbgMeta m;
            m.number_of_layers = std::stoi(require(kv, "layers"));
            m.nodes_per_layer = std::stoi(require(kv, "nodes_per_layer"));
            m.max_connectivity_range_layer = std::stoi(require(kv, "range"));
            m.connectivity_probability = parse_double(require(kv, "probability"));
            m.average_node_value = parse_double(require(kv, "average_value"));
            m.optimization_type =
                require(kv, "award_mode") == "constant" ? AwardMode::Constant : AwardMode::Random;
            for (const auto& tok : split_ws(require(kv, "award"))) m.award.push_back(parse_double(tok));
            inst.meta = std::move(m);
            break;
        }
        case ProblemKind::Tsp: {
            TspMeta m;
            m.n = std::stoi(require(kv, "n"));
            m.penalty_a = parse_double(require(kv, "penalty_a"));
            m.penalty_b = parse_double(require(kv, "penalty_b"));
            for (const auto& [k, v] : kv)
                if (k == "row")
                    for (const auto& tok : split_ws(v)) m.distances.push_back(parse_double(tok));
            if (static_cast<int>(m.distances.size()) != m.n * m.n)
                throw std::invalid_argument("instance meta: tsp distance matrix size mismatch");
            inst.meta = std::move(m);
            break;
        }
        case ProblemKind::Sca: {
            ScaMeta m;
            m.n_satellites = std::stoi(require(kv, "n_satellites"));
            m.k = std::stoi(require(kv, "k"));
            m.penalty = parse_double(require(kv, "penalty"));
            for (const auto& [k2, v] : kv) {
                if (k2 != "node") continue;
                const auto colon = v.find(':');
                ScaNode node;
                node.weight = parse_double(v.substr(0, v.find(' ')));
                for (const auto& tok : split_ws(v.substr(colon + 1))) node.satellites.push_back(std::stoi(tok));
                m.nodes.push_back(std::move(node));
            }
            inst.meta = std::move(m);
            break;
        }
        case ProblemKind::Mwp: {
            MwpMeta m;
            m.num_weeks = std::stoi(require(kv, "weeks"));
            m.num_locations = std::stoi(require(kv, "locations"));
            m.num_types = std::stoi(require(kv, "types"));
            const auto ws = split_ws(require(kv, "weights"));
            for (std::size_t i = 0; i < 4; ++i) m.constraint_weights[i] = parse_double(ws.at(i));
            for (const auto& [k2, v] : kv) {
                if (k2 == "repair") {
                    const auto toks = split_ws(v);
                    m.repairs.push_back({std::stoi(toks.at(0)), std::stoi(toks.at(1)),
                                         std::stoi(toks.at(2)), std::stoi(toks.at(3)),
                                         std::stoi(toks.at(4)), parse_double(toks.at(5))});
                } else if (k2 == "facility") {
                    std::vector<std::string> parts;
                    std::string cur;
                    std::istringstream pin(v);
                    std::string tok;
                    while (std::getline(pin, tok, ':')) parts.push_back(tok);
                    if (parts.size() != 6)
                        throw std::invalid_argument("instance meta: malformed facility line");
                    MwpFacility f;
                    f.weekly_capacity_hours = parse_double(split_ws(parts[0]).at(0));
                    for (const auto& s : split_ws(parts[1])) f.duration_weeks.push_back(std::stoi(s));
                    for (const auto& s : split_ws(parts[2])) f.repair_cost.push_back(parse_double(s));
                    for (const auto& s : split_ws(parts[3])) f.hours_per_week.push_back(parse_double(s));
                    for (const auto& s : split_ws(parts[4])) f.ship_cost.push_back(parse_double(s));
                    for (const auto& s : split_ws(parts[5])) f.ship_weeks.push_back(std::stoi(s));
                    m.facilities.push_back(std::move(f));
                } else if (k2 == "triple") {
                    const auto toks = split_ws(v);
                    m.variable_index.push_back(
                        {std::stoi(toks.at(0)), std::stoi(toks.at(1)), std::stoi(toks.at(2))});
                }
            }
            inst.meta = std::move(m);
            break;
        }
    }
    return inst;
}

}  // namespace qubobench
