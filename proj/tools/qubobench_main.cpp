#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qubobench/errors.hpp"
#include "qubobench/harness.hpp"

namespace {

using namespace qubobench;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

void apply_env_overrides(ExperimentSpec& spec) {
    if (const char* v = std::getenv("QUBOBENCH_TIME_THRESHOLD"))
        spec.time_threshold_seconds = parse_double(v);
}

int env_parallelism(int flag_value) {
    if (const char* v = std::getenv("QUBOBENCH_PARALLELISM")) return std::atoi(v);
    return flag_value;
}

void add_spec_flags(CLI::App* cmd, ExperimentSpec& spec, std::string& problem, std::string& solver,
                    std::string& sizes) {
    cmd->add_option("--problem", problem, "Problem kind: dbg, tsp, sca, mwp");
    cmd->add_option("--solver", solver, "Solver: random, pcd, fa, qbsolv, ich");
    cmd->add_option("--seed", spec.seed, "Experiment seed");
    cmd->add_option("--threshold", spec.time_threshold_seconds, "Wall-clock threshold in seconds");

    cmd->add_option("--dbg-layers", spec.dbg.number_of_layers, "DBG: number of layers");
    cmd->add_option("--dbg-nodes-per-layer", spec.dbg.nodes_per_layer, "DBG: nodes per layer");
    cmd->add_option("--dbg-range", spec.dbg.max_connectivity_range_layer,
                    "DBG: maximum layer distance for couplings");
    cmd->add_option("--dbg-probability", spec.dbg.connectivity_probability,
                    "DBG: connection probability");
    cmd->add_option("--dbg-average-value", spec.dbg.average_node_value, "DBG: average award value");
    cmd->add_option_function<std::string>(
        "--dbg-award-mode",
        [&spec](const std::string& v) {
            spec.dbg.optimization_type = v == "random" ? AwardMode::Random : AwardMode::Constant;
        },
        "DBG: constant or random awards");

    cmd->add_option("--tsp-n", spec.tsp_n, "TSP: vertex count for random instances");
    cmd->add_option("--tsp-file", spec.tsplib_path, "TSP: TSPLIB file to load");

    cmd->add_option("--sca-satellites", spec.sca.n_satellites, "SCA: satellite count");
    cmd->add_option("--sca-sizes", sizes, "SCA: allowed sub-constellation sizes, e.g. '3|4|5'");
    cmd->add_option("--sca-k", spec.sca.k, "SCA: clique size target");
    cmd->add_option("--sca-percentile", spec.sca.threshold_percentile,
                    "SCA: coverage percentile threshold");

    cmd->add_option("--mwp-repairs", spec.mwp.num_repairs, "MWP: repair count");
    cmd->add_option("--mwp-facilities", spec.mwp.num_facilities, "MWP: facility count");
    cmd->add_option("--mwp-types", spec.mwp.num_types, "MWP: repair type count");
    cmd->add_option("--mwp-weeks", spec.mwp.num_weeks, "MWP: horizon in weeks");
    cmd->add_option("--mwp-locations", spec.mwp.num_locations, "MWP: location count");

    cmd->add_option("--fa-population", spec.fa.population_size, "FA: population size");
    cmd->add_option("--fa-generations", spec.fa.num_generations, "FA: generations");
    cmd->add_option("--fa-crossover", spec.fa.crossover_rate, "FA: crossover rate");
    cmd->add_option("--fa-mutation", spec.fa.mutation_rate, "FA: per-bit mutation rate (0 = 1/N)");
    cmd->add_option("--fa-freeze-batch", spec.fa.freeze_batch, "FA: variables frozen per pass");
    cmd->add_option_function<std::string>(
        "--fa-weighting",
        [&spec](const std::string& v) {
            spec.fa.weighting =
                v == "multiply" ? FreezeWeighting::Multiply : FreezeWeighting::Normalize;
        },
        "FA: freeze score weighting, normalize or multiply");

    cmd->add_option("--qb-num-repeats", spec.qb.num_repeats,
                    "Qbsolv: non-improving iterations before stopping");
    cmd->add_option("--qb-subqubo-size", spec.qb.subqubo_size, "Qbsolv: sub-QUBO size (0 = capacity)");
    cmd->add_option("--qb-tabu-tenure", spec.qb.tabu_tenure, "Qbsolv: tabu tenure");

    cmd->add_option("--chimera-m", spec.chimera_m, "Backend: Chimera grid dimension");
    cmd->add_option("--max-clique", spec.budget.max_clique_size,
                    "Backend: largest embeddable complete sub-problem");
    cmd->add_option("--num-reads", spec.budget.num_reads, "Backend: reads per sub-problem");
    cmd->add_option("--sweeps", spec.budget.anneal_sweeps, "Backend: anneal sweeps per read");
    cmd->add_option("--chain-strength", spec.budget.chain_strength,
                    "Backend: chain strength (0 = auto)");
    cmd->add_option("--embed-effort", spec.budget.embed_effort,
                    "Backend: heuristic embedding restarts");
}

void resolve_spec(ExperimentSpec& spec, const std::string& problem, const std::string& solver,
                  const std::string& sizes, bool clique_given) {
    if (!problem.empty()) spec.kind = problem_kind_from_string(problem);
    if (!solver.empty()) spec.solver = solver_kind_from_string(solver);
    if (!sizes.empty()) {
        spec.sca.allowed_sizes.clear();
        std::istringstream in(sizes);
        std::string tok;
        while (std::getline(in, tok, '|')) spec.sca.allowed_sizes.push_back(std::stoi(tok));
    }
    if (!clique_given) spec.budget.max_clique_size = std::min(65, 4 * spec.chimera_m + 1);
}

int cmd_generate(const ExperimentSpec& spec, const std::string& out_base) {
    const ProblemInstance instance = generate_instance(spec);
    write_file(out_base + ".qubo", instance.qubo.to_text());
    write_file(out_base + ".meta", instance_meta_to_text(instance));
    std::cout << "wrote " << out_base << ".qubo (" << instance.qubo.num_vars() << " variables, "
              << instance.qubo.num_couplings() << " couplings) and " << out_base << ".meta\n";
    return 0;
}

int cmd_solve(ExperimentSpec spec, const std::string& config_path, const std::string& instance_base,
              const std::string& out_path) {
    if (!config_path.empty()) {
        spec = spec_from_config(parse_config(read_file(config_path)));
    }
    apply_env_overrides(spec);

    ExperimentRecord record;
    if (!instance_base.empty()) {
        const ProblemInstance instance = instance_from_text(read_file(instance_base + ".qubo"),
                                                            read_file(instance_base + ".meta"));
        record.problem = to_string(instance.kind);
        record.problem_params = "instance=" + instance_base;
        record.solver = to_string(spec.solver);
        record.seed = spec.seed;
        record.graph_size = instance.qubo.num_vars();
        record.edge_density = instance.qubo.num_vars() >= 2 ? instance.qubo.edge_density() : 0.0;
        const AnnealerBackend backend(ChimeraTopology(spec.chimera_m), spec.budget);
        const SolveReport report = dispatch_solver(spec, instance.qubo, backend);
        std::ostringstream params;
        bool first = true;
        for (const auto& [k, v] : report.parameters) {
            if (!first) params << ';';
            params << k << '=' << v;
            first = false;
        }
        record.solver_params = params.str();
        auto round_ms = [](double s) { return std::round(s * 1000.0) / 1000.0; };
        record.total_seconds = round_ms(report.total_seconds);
        record.classical_seconds = round_ms(report.classical_seconds);
        record.embedding_seconds = round_ms(report.embedding_seconds);
        record.quantum_seconds = round_ms(report.quantum_seconds);
        record.solution_energy = report.solution.energy;
        record.timed_out = report.timed_out;
        record.subproblems = report.subproblems_solved;
        const Evaluation eval = evaluate_instance(instance, report.solution.bits);
        record.broken_constraints = eval.broken;
        record.fixed_quality = eval.fixed_quality;
    } else {
        record = run_experiment(spec);
    }

    const std::string csv = records_to_csv({record});
    if (out_path.empty()) std::cout << csv;
    else write_file(out_path, csv);
    return 0;
}

int cmd_sweep(const std::string& config_path, int parallelism, const std::string& out_path) {
    const Config config = parse_config(read_file(config_path));
    std::vector<ExperimentSpec> cells = expand_grid(config);
    for (auto& cell : cells) apply_env_overrides(cell);

    const auto records = run_sweep(cells, env_parallelism(parallelism));
    const std::string csv = records_to_csv(records);
    if (out_path.empty()) std::cout << csv;
    else write_file(out_path, csv);

    for (const auto& r : records)
        if (!r.error.empty()) {
            std::cerr << "cell failed (" << r.problem << "/" << r.solver << " seed " << r.seed
                      << "): " << r.error << '\n';
            return 2;
        }
    return 0;
}

int cmd_summarize(const std::string& in_path, const std::string& out_path) {
    const auto records = records_from_csv(read_file(in_path));
    const std::string csv = summary_to_csv(summarize(records));
    if (out_path.empty()) std::cout << csv;
    else write_file(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QUBO decomposition benchmark harness"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string problem, solver, sizes;
    std::string config_path, instance_base, out_path, out_base = "instance", in_path;
    int parallelism = 1;

    auto* generate = app.add_subcommand("generate", "Generate a problem instance to files");
    add_spec_flags(generate, spec, problem, solver, sizes);
    generate->add_option("--out", out_base, "Output base path (.qubo and .meta)");

    auto* solve = app.add_subcommand("solve", "Run one experiment");
    add_spec_flags(solve, spec, problem, solver, sizes);
    solve->add_option("--config", config_path, "Experiment config file");
    solve->add_option("--instance", instance_base, "Load a generated instance (base path)");
    solve->add_option("--out", out_path, "Write the record CSV here instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "Run a parameter grid from a config file");
    sweep->add_option("--config", config_path, "Sweep config file")->required();
    sweep->add_option("--parallelism", parallelism, "Concurrent cells");
    sweep->add_option("--out", out_path, "Write the CSV here instead of stdout");

    auto* summ = app.add_subcommand("summarize", "Aggregate a sweep CSV");
    summ->add_option("--in", in_path, "Input CSV")->required();
    summ->add_option("--out", out_path, "Write the summary here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            resolve_spec(spec, problem, solver, sizes, generate->count("--max-clique") > 0);
            return cmd_generate(spec, out_base);
        }
        if (solve->parsed()) {
            resolve_spec(spec, problem, solver, sizes, solve->count("--max-clique") > 0);
            return cmd_solve(spec, config_path, instance_base, out_path);
        }
        if (sweep->parsed()) return cmd_sweep(config_path, parallelism, out_path);
        if (summ->parsed()) return cmd_summarize(in_path, out_path);
    } catch (const qubobench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
