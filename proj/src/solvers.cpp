#include "qubobench/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "qubobench/layout.hpp"
#include "qubobench/rng.hpp"

namespace qubobench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void finalize(SolveReport& report, const Qubo& qubo, std::vector<std::uint8_t> bits,
              Clock::time_point t0) {
    report.solution.bits = std::move(bits);
    report.solution.energy = qubo.energy(report.solution.bits);
    report.total_seconds = seconds_since(t0);
    if (report.embedding_seconds + report.quantum_seconds > report.total_seconds)
        report.total_seconds = report.embedding_seconds + report.quantum_seconds;
    report.classical_seconds =
        report.total_seconds - report.embedding_seconds - report.quantum_seconds;
}

// Current assignment with incrementally maintained coupling fields
// f_i = sum_j b_ij x_j, giving O(1) flip deltas.
struct SearchState {
    const CompiledQubo& c;
    std::vector<std::uint8_t> bits;
    std::vector<double> field;
    double energy = 0.0;

    SearchState(const CompiledQubo& compiled, std::vector<std::uint8_t> initial)
        : c(compiled), bits(std::move(initial)) {
        resync();
    }

    void resync() {
        field.assign(c.n, 0.0);
        for (int i = 0; i < c.n; ++i) {
            if (!bits[i]) continue;
            for (int a = c.adj_start[i]; a < c.adj_start[i + 1]; ++a)
                field[c.adj_index[a]] += c.adj_weight[a];
        }
        energy = c.energy(bits);
    }

    double delta(int i) const { return (bits[i] ? -1.0 : 1.0) * (c.bias[i] + field[i]); }

    void flip(int i) {
        const double sign = bits[i] ? -1.0 : 1.0;
        energy += delta(i);
        bits[i] ^= 1;
        for (int a = c.adj_start[i]; a < c.adj_start[i + 1]; ++a)
            field[c.adj_index[a]] += sign * c.adj_weight[a];
    }
};

}  // namespace

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Random: return "random";
        case SolverKind::Pcd: return "pcd";
        case SolverKind::Fa: return "fa";
        case SolverKind::Qbsolv: return "qbsolv";
        case SolverKind::Ich: return "ich";
    }
    return "?";
}

SolverKind solver_kind_from_string(const std::string& s) {
    if (s == "random") return SolverKind::Random;
    if (s == "pcd") return SolverKind::Pcd;
    if (s == "fa") return SolverKind::Fa;
    if (s == "qbsolv") return SolverKind::Qbsolv;
    if (s == "ich") return SolverKind::Ich;
    throw std::invalid_argument("unknown solver: " + s);
}

// ---------------------------------------------------------------------------
// Random baseline
// ---------------------------------------------------------------------------

SolveReport solve_random(const Qubo& qubo, std::uint64_t seed) {
    const auto t0 = Clock::now();
    SolveReport report;
    report.solver_name = "random";
    Rng rng(seed);
    std::vector<std::uint8_t> bits(qubo.num_vars());
    for (auto& b : bits) b = rng.next_bit() ? 1 : 0;
    finalize(report, qubo, std::move(bits), t0);
    return report;
}

// ---------------------------------------------------------------------------
// Principal component decomposition
// ---------------------------------------------------------------------------

SolveReport solve_pcd(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                      std::uint64_t seed) {
    const auto t0 = Clock::now();
    SolveReport report;
    report.solver_name = "pcd";
    report.parameters["layout_iterations"] = "1000";
    report.parameters["embed_effort"] = std::to_string(backend.budget().embed_effort);

    const int n = qubo.num_vars();
    std::vector<std::uint8_t> bits(n, 0);
    if (n == 0) {
        finalize(report, qubo, std::move(bits), t0);
        return report;
    }

    // Degenerate edgeless problem: each variable is independent.
    if (qubo.num_couplings() == 0) {
        for (int i = 0; i < n; ++i) bits[i] = qubo.linear(i) < 0.0 ? 1 : 0;
        finalize(report, qubo, std::move(bits), t0);
        return report;
    }

    const auto adj = qubo.adjacency();
    const auto positions = spring_layout(adj, 1000, mix_seed(seed, 0));
    const auto principal = pca_primary_axis(positions);

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (principal[a] != principal[b]) return principal[a] < principal[b];
        return a < b;
    });

    std::vector<int> slice_id(n, -1);
    int next_slice = 0;
    std::uint64_t stream = 1;

    // Depth-first slicing over contiguous ranges of the principal-axis order.
    std::vector<std::pair<int, int>> stack{{0, n}};
    while (!stack.empty()) {
        if (seconds_since(t0) > budget_seconds) {
            report.timed_out = true;
            break;
        }
        const auto [lo, hi] = stack.back();
        stack.pop_back();

        std::vector<int> nodes(order.begin() + lo, order.begin() + hi);
        std::sort(nodes.begin(), nodes.end());
        std::vector<int> local(n, -1);
        for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);

        // Induced sub-problem; edges crossing the slice boundary are dropped.
        Qubo sub(static_cast<int>(nodes.size()));
        for (std::size_t i = 0; i < nodes.size(); ++i) sub.add_linear(static_cast<int>(i), qubo.linear(nodes[i]));
        std::vector<std::vector<int>> sub_adj(nodes.size());
        for (const auto& [key, b] : qubo.quadratic_terms()) {
            const int lp = local[key.first], lq = local[key.second];
            if (lp < 0 || lq < 0) continue;
            sub.add_quadratic(lp, lq, b);
            sub_adj[lp].push_back(lq);
            sub_adj[lq].push_back(lp);
        }
        for (auto& row : sub_adj) std::sort(row.begin(), row.end());

        if (nodes.size() == 1 || sub.num_couplings() == 0) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                bits[nodes[i]] = sub.linear(static_cast<int>(i)) < 0.0 ? 1 : 0;
                slice_id[nodes[i]] = next_slice;
            }
            ++next_slice;
            continue;
        }

        const auto t_embed = Clock::now();
        const auto emb = heuristic_embed(sub_adj, backend.topology(), backend.budget().embed_effort,
                                         mix_seed(seed, stream++));
        report.embedding_seconds += seconds_since(t_embed);

        if (!emb) {
            const int mid = lo + (hi - lo) / 2;
            stack.emplace_back(mid, hi);
            stack.emplace_back(lo, mid);
            continue;
        }

        const auto result = backend.subsolve_embedded(sub, *emb, mix_seed(seed, stream++));
        report.embedding_seconds += result.embedding_seconds;
        report.quantum_seconds += result.quantum_seconds;
        ++report.subproblems_solved;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            bits[nodes[i]] = result.solution.bits[i];
            slice_id[nodes[i]] = next_slice;
        }
        ++next_slice;
    }

    // Greedy recomposition: single-bit descent over variables incident to a
    // cut edge, strict improvement only.
    if (!report.timed_out) {
        std::vector<char> cut_incident(n, 0);
        for (const auto& [key, b] : qubo.quadratic_terms()) {
            (void)b;
            if (slice_id[key.first] != slice_id[key.second])
                cut_incident[key.first] = cut_incident[key.second] = 1;
        }
        const CompiledQubo compiled = CompiledQubo::from(qubo);
        SearchState state(compiled, bits);
        while (true) {
            int pick = -1;
            double pick_delta = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!cut_incident[i]) continue;
                const double d = state.delta(i);
                if (d < pick_delta) {
                    pick = i;
                    pick_delta = d;
                }
            }
            if (pick == -1) break;
            state.flip(pick);
        }
        bits = state.bits;
    }

    finalize(report, qubo, std::move(bits), t0);
    return report;
}

// ---------------------------------------------------------------------------
// Freeze-and-anneal
// ---------------------------------------------------------------------------

std::vector<FreezeScore> fa_freeze_scores(const std::vector<std::vector<std::uint8_t>>& population,
                                          FreezeWeighting weighting) {
    if (population.empty()) throw std::invalid_argument("fa_freeze_scores: empty population");
    const int pop_size = static_cast<int>(population.size());
    const int positions = static_cast<int>(population.front().size());

    std::vector<int> ones(positions, 0);
    long long total_ones = 0;
    for (const auto& individual : population)
        for (int r = 0; r < positions; ++r) {
            ones[r] += individual[r];
            total_ones += individual[r];
        }
    const double f1 =
        static_cast<double>(total_ones) / (static_cast<double>(pop_size) * positions);
    const double f0 = 1.0 - f1;

    std::vector<FreezeScore> out(positions);
    for (int r = 0; r < positions; ++r) {
        const std::uint8_t consensus = 2 * ones[r] > pop_size ? 1 : 0;
        const double freq =
            static_cast<double>(consensus ? ones[r] : pop_size - ones[r]) / pop_size;
        const double pop_freq = consensus ? f1 : f0;
        out[r].consensus = consensus;
        out[r].score =
            weighting == FreezeWeighting::Normalize ? freq / pop_freq : freq * pop_freq;
    }
    return out;
}

SolveReport solve_fa(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                     const FaParams& params, std::uint64_t seed) {
    if (params.population_size < 2)
        throw std::invalid_argument("solve_fa: population size must be at least 2");
    if (params.num_generations < 0 || params.freeze_batch < 1)
        throw std::invalid_argument("solve_fa: bad generation count or freeze batch");

    const auto t0 = Clock::now();
    const int n = qubo.num_vars();
    const int pop_size = params.population_size;
    const double mutation = params.mutation_rate > 0.0 ? params.mutation_rate
                                                       : 1.0 / std::max(1, n);

    SolveReport report;
    report.solver_name = "fa";
    report.parameters["population_size"] = std::to_string(pop_size);
    report.parameters["num_generations"] = std::to_string(params.num_generations);
    report.parameters["crossover_rate"] = format_double(params.crossover_rate);
    report.parameters["mutation_rate"] = format_double(mutation);
    report.parameters["freeze_batch"] = std::to_string(params.freeze_batch);
    report.parameters["freeze_weighting"] =
        params.weighting == FreezeWeighting::Normalize ? "normalize" : "multiply";

    if (n == 0) {
        finalize(report, qubo, {}, t0);
        return report;
    }

    Rng rng(mix_seed(seed, 0));

    std::vector<std::vector<std::uint8_t>> pop(pop_size, std::vector<std::uint8_t>(n));
    for (auto& ind : pop)
        for (auto& b : ind) b = rng.next_bit() ? 1 : 0;
    std::vector<double> fitness(pop_size);
    for (int i = 0; i < pop_size; ++i) fitness[i] = qubo.energy(pop[i]);

    auto best_index = [&] {
        int best = 0;
        for (int i = 1; i < pop_size; ++i)
            if (fitness[i] < fitness[best]) best = i;
        return best;
    };

    for (int gen = 0; gen < params.num_generations && !report.timed_out; ++gen) {
        if (seconds_since(t0) > budget_seconds) {
            report.timed_out = true;
            break;
        }
        std::vector<std::vector<std::uint8_t>> next(pop_size);
        next[0] = pop[best_index()];  // elitism of one
        for (int slot = 1; slot < pop_size; ++slot) {
            auto tournament = [&] {
                const int a = rng.uniform_int(0, pop_size - 1);
                const int b = rng.uniform_int(0, pop_size - 1);
                return fitness[a] <= fitness[b] ? a : b;
            };
            const int p1 = tournament();
            const int p2 = tournament();
            std::vector<std::uint8_t> child;
            if (rng.bernoulli(params.crossover_rate)) {
                child.resize(n);
                for (int b = 0; b < n; ++b) child[b] = rng.next_bit() ? pop[p1][b] : pop[p2][b];
            } else {
                child = pop[p1];
            }
            for (int b = 0; b < n; ++b)
                if (rng.bernoulli(mutation)) child[b] ^= 1;
            next[slot] = std::move(child);
        }
        pop = std::move(next);
        for (int i = 0; i < pop_size; ++i) fitness[i] = qubo.energy(pop[i]);
    }

    // Iterative freezing: consensus votes ranked by fa_freeze_scores decide
    // which variables to fix next, until the residual fits the backend.
    ReducedQubo red = ReducedQubo::whole(qubo);
    while (!report.timed_out && red.qubo.num_vars() > backend.capacity()) {
        if (seconds_since(t0) > budget_seconds) {
            report.timed_out = true;
            break;
        }
        const int remaining = red.qubo.num_vars();
        const auto freeze = fa_freeze_scores(pop, params.weighting);

        struct Scored {
            double score;
            int local;
            std::uint8_t value;
        };
        std::vector<Scored> scored(remaining);
        for (int r = 0; r < remaining; ++r) scored[r] = {freeze[r].score, r, freeze[r].consensus};
        const int batch = std::min(params.freeze_batch, remaining - backend.capacity());
        std::partial_sort(scored.begin(), scored.begin() + batch, scored.end(),
                          [](const Scored& a, const Scored& b) {
                              if (a.score != b.score) return a.score > b.score;
                              return a.local < b.local;
                          });
        std::vector<Scored> chosen(scored.begin(), scored.begin() + batch);
        std::sort(chosen.begin(), chosen.end(),
                  [](const Scored& a, const Scored& b) { return a.local > b.local; });
        for (const auto& s : chosen) {
            red.fix(red.index_map[s.local], s.value != 0);
            for (auto& ind : pop) ind.erase(ind.begin() + s.local);
        }
    }

    std::vector<std::uint8_t> full_bits;
    if (!report.timed_out) {
        const auto result = backend.subsolve(red.qubo, mix_seed(seed, 1));
        report.embedding_seconds += result.embedding_seconds;
        report.quantum_seconds += result.quantum_seconds;
        ++report.subproblems_solved;
        full_bits = red.expand(result.solution.bits);
    } else {
        // Partial result: complete the residual with the fittest individual.
        for (int i = 0; i < pop_size; ++i) fitness[i] = red.qubo.energy(pop[i]);
        full_bits = red.expand(pop[best_index()]);
    }
    finalize(report, qubo, std::move(full_bits), t0);
    return report;
}

// ---------------------------------------------------------------------------
// Qbsolv-style solver
// ---------------------------------------------------------------------------

SolveReport solve_qb(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                     const QbParams& params, std::uint64_t seed) {
    if (params.num_repeats < 1) throw std::invalid_argument("solve_qb: num_repeats must be positive");
    if (params.subqubo_size > backend.capacity())
        throw std::invalid_argument("solve_qb: subqubo_size exceeds backend capacity");

    const auto t0 = Clock::now();
    const int n = qubo.num_vars();
    const int group_size = params.subqubo_size > 0 ? params.subqubo_size : backend.capacity();
    const int tenure = std::clamp(params.tabu_tenure, 1, std::max(1, n - 1));

    SolveReport report;
    report.solver_name = "qbsolv";
    report.parameters["num_repeats"] = std::to_string(params.num_repeats);
    report.parameters["subqubo_size"] = std::to_string(group_size);
    report.parameters["tabu_tenure"] = std::to_string(tenure);

    if (n == 0) {
        finalize(report, qubo, {}, t0);
        return report;
    }

    Rng rng(mix_seed(seed, 0));
    const CompiledQubo compiled = CompiledQubo::from(qubo);

    std::vector<std::uint8_t> initial(n);
    for (auto& b : initial) b = rng.next_bit() ? 1 : 0;
    SearchState state(compiled, std::move(initial));

    std::vector<std::uint8_t> best = state.bits;
    double best_energy = state.energy;
    int stall = 0;
    std::uint64_t stream = 1;

    while (!report.timed_out) {
        const double best_at_start = best_energy;

        // (1) rank variables by flip impact on the current global solution
        std::vector<int> rank(n);
        for (int i = 0; i < n; ++i) rank[i] = i;
        std::vector<double> impact(n);
        for (int i = 0; i < n; ++i) impact[i] = std::abs(state.delta(i));
        std::sort(rank.begin(), rank.end(), [&](int a, int b) {
            if (impact[a] != impact[b]) return impact[a] > impact[b];
            return a < b;
        });

        // (2)+(3) clamp and sub-solve disjoint groups on the cached embedding
        for (int lo = 0; lo < n; lo += group_size) {
            if (seconds_since(t0) > budget_seconds) {
                report.timed_out = true;
                break;
            }
            const int hi = std::min(lo + group_size, n);
            std::vector<int> subset(rank.begin() + lo, rank.begin() + hi);
            std::sort(subset.begin(), subset.end());

            const ReducedQubo red = clamp_subqubo(qubo, subset, state.bits);
            const auto result = backend.subsolve(red.qubo, mix_seed(seed, stream++));
            report.embedding_seconds += result.embedding_seconds;
            report.quantum_seconds += result.quantum_seconds;
            ++report.subproblems_solved;

            std::vector<std::uint8_t> candidate = state.bits;
            for (std::size_t i = 0; i < subset.size(); ++i)
                candidate[subset[i]] = result.solution.bits[i];
            const double cand_energy = compiled.energy(candidate);
            if (cand_energy < state.energy) {
                state.bits = std::move(candidate);
                state.resync();
            }
            if (state.energy < best_energy) {
                best = state.bits;
                best_energy = state.energy;
            }
        }
        if (report.timed_out) break;

        // (4) tabu search over the full problem for n iterations, obligatory
        // best non-tabu move, aspiration on a new global best
        std::vector<int> tabu_until(n, 0);
        for (int step = 0; step < n; ++step) {
            int pick = -1;
            double pick_delta = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = state.delta(i);
                const bool allowed =
                    tabu_until[i] <= step || state.energy + d < best_energy;
                if (!allowed) continue;
                if (pick == -1 || d < pick_delta) {
                    pick = i;
                    pick_delta = d;
                }
            }
            if (pick == -1) break;  // everything tabu and no aspiring move
            state.flip(pick);
            tabu_until[pick] = step + tenure + 1;
            if (state.energy < best_energy) {
                best = state.bits;
                best_energy = state.energy;
            }
        }

        stall = best_energy < best_at_start ? 0 : stall + 1;
        if (stall >= params.num_repeats) break;
    }

    finalize(report, qubo, std::move(best), t0);
    return report;
}

// ---------------------------------------------------------------------------
// Iterative centrality halo
// ---------------------------------------------------------------------------

SolveReport solve_ich(const Qubo& qubo, const AnnealerBackend& backend, double budget_seconds,
                      std::uint64_t seed) {
    const auto t0 = Clock::now();
    const int n = qubo.num_vars();

    SolveReport report;
    report.solver_name = "ich";
    report.parameters["max_nodes"] = std::to_string(backend.capacity());

    std::vector<std::uint8_t> global(n, 0);
    if (n == 0) {
        finalize(report, qubo, std::move(global), t0);
        return report;
    }

    Rng rng(mix_seed(seed, 0));
    ReducedQubo red = ReducedQubo::whole(qubo);
    long long isolated_nodes = 0;
    long long size_total = 0;
    std::uint64_t stream = 1;

    while (red.qubo.num_vars() > 0) {
        if (seconds_since(t0) > budget_seconds) {
            report.timed_out = true;
            break;
        }

        // Degree-0 nodes are decided classically by bias sign, in one batch.
        const int remaining = red.qubo.num_vars();
        std::vector<int> degree(remaining, 0);
        for (const auto& [key, b] : red.qubo.quadratic_terms()) {
            (void)b;
            ++degree[key.first];
            ++degree[key.second];
        }
        std::vector<std::pair<int, bool>> isolated;  // original index, value
        for (int local = 0; local < remaining; ++local)
            if (degree[local] == 0)
                isolated.emplace_back(red.index_map[local], red.qubo.linear(local) < 0.0);
        if (!isolated.empty()) {
            for (const auto& [orig, value] : isolated) {
                global[orig] = value ? 1 : 0;
                red.fix(orig, value);
            }
            isolated_nodes += static_cast<long long>(isolated.size());
            continue;
        }

        const int central = red.qubo.max_degree_node();
        std::vector<int> halo = red.qubo.neighbors(central);
        if (static_cast<int>(halo.size()) > backend.capacity() - 1) {
            rng.shuffle(halo);
            halo.resize(backend.capacity() - 1);
        }
        halo.push_back(central);
        std::sort(halo.begin(), halo.end());

        // The unsolved remainder is all-zero in the global solution, and the
        // influence of solved variables is already folded into the reduced
        // biases, so clamping against a zero context realizes the clamping of
        // the sub-QUBO against the current global solution.
        const std::vector<std::uint8_t> context(remaining, 0);
        const ReducedQubo sub = clamp_subqubo(red.qubo, halo, context);
        const auto result = backend.subsolve(sub.qubo, mix_seed(seed, stream++));
        report.embedding_seconds += result.embedding_seconds;
        report.quantum_seconds += result.quantum_seconds;
        ++report.subproblems_solved;
        size_total += static_cast<long long>(halo.size());

        std::vector<int> originals(halo.size());
        for (std::size_t i = 0; i < halo.size(); ++i) originals[i] = red.index_map[halo[i]];
        for (std::size_t i = 0; i < halo.size(); ++i) {
            const bool value = result.solution.bits[i] != 0;
            global[originals[i]] = value ? 1 : 0;
            red.fix(originals[i], value);
        }
    }

    report.parameters["isolated_nodes"] = std::to_string(isolated_nodes);
    report.parameters["subproblem_size_total"] = std::to_string(size_total);
    finalize(report, qubo, std::move(global), t0);
    return report;
}

}  // namespace qubobench
