#include "qubobench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "qubobench/errors.hpp"

namespace qubobench {

namespace {

double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

std::string sanitize_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

std::string join_sizes(const std::vector<int>& sizes) {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += '|';
        out += std::to_string(sizes[i]);
    }
    return out;
}

}  // namespace

std::string ExperimentSpec::problem_params_string() const {
    std::ostringstream out;
    switch (kind) {
        case ProblemKind::Dbg:
            out << "layers=" << dbg.number_of_layers << ";npl=" << dbg.nodes_per_layer
                << ";range=" << dbg.max_connectivity_range_layer
                << ";p=" << format_double(dbg.connectivity_probability)
                << ";avg=" << format_double(dbg.average_node_value) << ";award="
                << (dbg.optimization_type == AwardMode::Constant ? "constant" : "random");
            break;
        case ProblemKind::Tsp:
            if (tsplib_path.empty()) out << "n=" << tsp_n;
            else out << "file=" << tsplib_path;
            break;
        case ProblemKind::Sca:
            out << "satellites=" << sca.n_satellites << ";sizes=" << join_sizes(sca.allowed_sizes)
                << ";k=" << sca.k << ";percentile=" << format_double(sca.threshold_percentile);
            break;
        case ProblemKind::Mwp:
            out << "repairs=" << mwp.num_repairs << ";facilities=" << mwp.num_facilities
                << ";types=" << mwp.num_types << ";weeks=" << mwp.num_weeks
                << ";locations=" << mwp.num_locations;
            break;
    }
    return out.str();
}

ProblemInstance generate_instance(const ExperimentSpec& spec) {
    switch (spec.kind) {
        case ProblemKind::Dbg:
            return gen_dbg(spec.dbg, spec.seed);
        case ProblemKind::Tsp: {
            if (!spec.tsplib_path.empty()) {
                std::ifstream in(spec.tsplib_path);
                if (!in) throw std::runtime_error("cannot open tsplib file: " + spec.tsplib_path);
                std::stringstream buffer;
                buffer << in.rdbuf();
                const TspMatrix matrix = load_tsplib(buffer.str());
                return tsp_to_qubo(make_tsp_meta(matrix.n, matrix.distances), spec.seed);
            }
            return tsp_to_qubo(make_tsp_meta(spec.tsp_n, gen_tsp_random(spec.tsp_n, spec.seed)),
                               spec.seed);
        }
        case ProblemKind::Sca:
            return gen_sca(spec.sca, spec.seed);
        case ProblemKind::Mwp:
            return gen_mwp(sample_mwp_meta(spec.mwp, spec.seed), spec.mwp.weights, spec.seed);
    }
    throw std::logic_error("unreachable problem kind");
}

SolveReport dispatch_solver(const ExperimentSpec& spec, const Qubo& qubo,
                            const AnnealerBackend& backend) {
    switch (spec.solver) {
        case SolverKind::Random: return solve_random(qubo, spec.seed);
        case SolverKind::Pcd: return solve_pcd(qubo, backend, spec.time_threshold_seconds, spec.seed);
        case SolverKind::Fa:
            return solve_fa(qubo, backend, spec.time_threshold_seconds, spec.fa, spec.seed);
        case SolverKind::Qbsolv:
            return solve_qb(qubo, backend, spec.time_threshold_seconds, spec.qb, spec.seed);
        case SolverKind::Ich:
            return solve_ich(qubo, backend, spec.time_threshold_seconds, spec.seed);
    }
    throw std::logic_error("unreachable solver kind");
}

ExperimentRecord run_experiment(const ExperimentSpec& spec) {
    if (spec.time_threshold_seconds <= 0.0)
        throw std::invalid_argument("run_experiment: time threshold must be positive");

    ExperimentRecord record;
    record.problem = to_string(spec.kind);
    record.problem_params = spec.problem_params_string();
    record.solver = to_string(spec.solver);
    record.seed = spec.seed;

    const ProblemInstance instance = generate_instance(spec);
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
    return record;
}

// ---------------------------------------------------------------------------
// Config reading
// ---------------------------------------------------------------------------

namespace {

int to_int(const std::string& v, const std::string& key) {
    try {
        return std::stoi(v);
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": " + v);
    }
}

double to_real(const std::string& v, const std::string& key) {
    try {
        return parse_double(v);
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": " + v);
    }
}

std::vector<int> to_int_list(const std::string& v, const std::string& key) {
    std::vector<int> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(to_int(tok, key));
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

void apply_entry(ExperimentSpec& spec, const std::string& section, const std::string& key,
                 const std::string& value) {
    if (section == "experiment") {
        if (key == "problem") spec.kind = problem_kind_from_string(value);
        else if (key == "solver") spec.solver = solver_kind_from_string(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "time_threshold") spec.time_threshold_seconds = to_real(value, key);
        else throw ConfigError("config: unknown [experiment] key " + key);
        return;
    }
    if (section == "problem") {
        if (key == "layers") spec.dbg.number_of_layers = to_int(value, key);
        else if (key == "nodes_per_layer") spec.dbg.nodes_per_layer = to_int(value, key);
        else if (key == "range") spec.dbg.max_connectivity_range_layer = to_int(value, key);
        else if (key == "probability") spec.dbg.connectivity_probability = to_real(value, key);
        else if (key == "average_value") spec.dbg.average_node_value = to_real(value, key);
        else if (key == "award_mode")
            spec.dbg.optimization_type = value == "random" ? AwardMode::Random : AwardMode::Constant;
        else if (key == "n") spec.tsp_n = to_int(value, key);
        else if (key == "file") spec.tsplib_path = value;
        else if (key == "satellites") spec.sca.n_satellites = to_int(value, key);
        else if (key == "sizes") spec.sca.allowed_sizes = to_int_list(value, key);
        else if (key == "k") spec.sca.k = to_int(value, key);
        else if (key == "percentile") spec.sca.threshold_percentile = to_real(value, key);
        else if (key == "repairs") spec.mwp.num_repairs = to_int(value, key);
        else if (key == "facilities") spec.mwp.num_facilities = to_int(value, key);
        else if (key == "types") spec.mwp.num_types = to_int(value, key);
        else if (key == "weeks") spec.mwp.num_weeks = to_int(value, key);
        else if (key == "locations") spec.mwp.num_locations = to_int(value, key);
        else if (key == "weights") {
            std::istringstream in(value);
            for (double& w : spec.mwp.weights)
                if (!(in >> w)) throw ConfigError("config: weights needs four numbers");
        } else throw ConfigError("config: unknown [problem] key " + key);
        return;
    }
    if (section == "solver") {
        if (key == "population") spec.fa.population_size = to_int(value, key);
        else if (key == "generations") spec.fa.num_generations = to_int(value, key);
        else if (key == "crossover") spec.fa.crossover_rate = to_real(value, key);
        else if (key == "mutation") spec.fa.mutation_rate = to_real(value, key);
        else if (key == "freeze_batch") spec.fa.freeze_batch = to_int(value, key);
        else if (key == "weighting")
            spec.fa.weighting =
                value == "multiply" ? FreezeWeighting::Multiply : FreezeWeighting::Normalize;
        else if (key == "num_repeats") spec.qb.num_repeats = to_int(value, key);
        else if (key == "subqubo_size") spec.qb.subqubo_size = to_int(value, key);
        else if (key == "tabu_tenure") spec.qb.tabu_tenure = to_int(value, key);
        else throw ConfigError("config: unknown [solver] key " + key);
        return;
    }
    if (section == "backend") {
        if (key == "chimera_m") spec.chimera_m = to_int(value, key);
        else if (key == "max_clique") spec.budget.max_clique_size = to_int(value, key);
        else if (key == "num_reads") spec.budget.num_reads = to_int(value, key);
        else if (key == "sweeps") spec.budget.anneal_sweeps = to_int(value, key);
        else if (key == "chain_strength") spec.budget.chain_strength = to_real(value, key);
        else if (key == "embed_effort") spec.budget.embed_effort = to_int(value, key);
        else if (key == "rng_seed") spec.budget.rng_seed = std::stoull(value);
        else throw ConfigError("config: unknown [backend] key " + key);
        return;
    }
    throw ConfigError("config: unknown section [" + section + "]");
}

struct GridEntry {
    std::string section, key;
    std::vector<std::string> values;
};

ExperimentSpec build_spec(const std::vector<GridEntry>& entries, const std::vector<std::size_t>& pick) {
    ExperimentSpec spec;
    bool clique_given = false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        apply_entry(spec, entries[i].section, entries[i].key, entries[i].values[pick[i]]);
        if (entries[i].section == "backend" && entries[i].key == "max_clique") clique_given = true;
    }
    if (!clique_given)
        spec.budget.max_clique_size = std::min(65, 4 * spec.chimera_m + 1);
    return spec;
}

std::vector<GridEntry> collect_entries(const Config& config) {
    std::vector<GridEntry> out;
    for (const auto& section : config.sections)
        for (const auto& [key, value] : section.entries)
            out.push_back({section.name, key, split_list(value)});
    return out;
}

}  // namespace

ExperimentSpec spec_from_config(const Config& config) {
    const auto entries = collect_entries(config);
    std::vector<std::size_t> pick(entries.size(), 0);
    for (const auto& e : entries)
        if (e.values.size() > 1)
            throw ConfigError("config: list value for " + e.key + " is only valid in a sweep");
    return build_spec(entries, pick);
}

std::vector<ExperimentSpec> expand_grid(const Config& config) {
    const auto entries = collect_entries(config);
    if (entries.empty()) return {};
    std::vector<std::size_t> pick(entries.size(), 0);
    std::vector<ExperimentSpec> cells;
    std::uint64_t index = 0;
    while (true) {
        ExperimentSpec spec = build_spec(entries, pick);
        spec.seed += index;  // independent seed per cell
        ++index;
        cells.push_back(std::move(spec));

        // Odometer over the grid, last listed key varying fastest.
        std::size_t level = entries.size();
        while (level > 0) {
            --level;
            if (++pick[level] < entries[level].values.size()) break;
            pick[level] = 0;
            if (level == 0) return cells;
        }
    }
}

std::vector<ExperimentRecord> run_sweep(const std::vector<ExperimentSpec>& cells, int parallelism) {
    if (parallelism < 1) throw std::invalid_argument("run_sweep: parallelism must be positive");
    std::vector<ExperimentRecord> records(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            try {
                records[i] = run_experiment(cells[i]);
            } catch (const std::exception& e) {
                ExperimentRecord failed;
                failed.problem = to_string(cells[i].kind);
                failed.problem_params = cells[i].problem_params_string();
                failed.solver = to_string(cells[i].solver);
                failed.seed = cells[i].seed;
                // Keep the record CSV-clean so emit/parse round-trips.
                failed.error = sanitize_field(e.what());
                records[i] = std::move(failed);
            }
        }
    };

    const int workers = std::min<std::size_t>(parallelism, std::max<std::size_t>(cells.size(), 1));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string csv_header() {
    return "schema_v" + std::to_string(kCsvSchemaVersion) +
           ",problem,problem_params,solver,solver_params,seed,graph_size,edge_density,"
           "total_seconds,classical_seconds,embedding_seconds,quantum_seconds,solution_energy,"
           "broken_constraints,fixed_quality,timed_out,subproblems,error";
}

namespace {

std::string record_to_csv(const ExperimentRecord& r) {
    std::ostringstream out;
    out << kCsvSchemaVersion << ',' << sanitize_field(r.problem) << ','
        << sanitize_field(r.problem_params) << ',' << sanitize_field(r.solver) << ','
        << sanitize_field(r.solver_params) << ',' << r.seed << ',' << r.graph_size << ','
        << format_double(r.edge_density) << ',' << format_double(r.total_seconds) << ','
        << format_double(r.classical_seconds) << ',' << format_double(r.embedding_seconds) << ','
        << format_double(r.quantum_seconds) << ',' << format_double(r.solution_energy) << ',';
    if (r.broken_constraints) out << *r.broken_constraints;
    else out << "N/A";
    out << ',' << format_double(r.fixed_quality) << ',' << (r.timed_out ? "true" : "false") << ','
        << r.subproblems << ',' << sanitize_field(r.error);
    return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : records) out << record_to_csv(r) << '\n';
    return out.str();
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::invalid_argument("csv: missing or mismatched header");
    std::vector<ExperimentRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 18) throw std::invalid_argument("csv: wrong field count in row");
        if (std::stoi(fields[0]) != kCsvSchemaVersion)
            throw std::invalid_argument("csv: unsupported schema version " + fields[0]);
        ExperimentRecord r;
        r.problem = fields[1];
        r.problem_params = fields[2];
        r.solver = fields[3];
        r.solver_params = fields[4];
        r.seed = std::stoull(fields[5]);
        r.graph_size = std::stoll(fields[6]);
        r.edge_density = parse_double(fields[7]);
        r.total_seconds = parse_double(fields[8]);
        r.classical_seconds = parse_double(fields[9]);
        r.embedding_seconds = parse_double(fields[10]);
        r.quantum_seconds = parse_double(fields[11]);
        r.solution_energy = parse_double(fields[12]);
        if (fields[13] != "N/A") r.broken_constraints = std::stoll(fields[13]);
        r.fixed_quality = parse_double(fields[14]);
        r.timed_out = fields[15] == "true";
        r.subproblems = std::stoll(fields[16]);
        r.error = fields[17];
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records) {
    std::vector<SummaryRow> rows;
    auto find_row = [&rows](const std::string& problem, const std::string& solver) -> SummaryRow& {
        for (auto& r : rows)
            if (r.problem == problem && r.solver == solver) return r;
        rows.push_back({problem, solver, 0, 0, 0, 0, 0, 0, 0, 0, 0});
        return rows.back();
    };

    for (const auto& rec : records) {
        if (!rec.error.empty()) continue;
        SummaryRow& row = find_row(rec.problem, rec.solver);
        if (row.count == 0 || rec.solution_energy < row.min_energy) row.min_energy = rec.solution_energy;
        row.mean_energy += rec.solution_energy;
        row.mean_total_seconds += rec.total_seconds;
        row.mean_classical_seconds += rec.classical_seconds;
        row.mean_embedding_seconds += rec.embedding_seconds;
        row.mean_quantum_seconds += rec.quantum_seconds;
        row.mean_fixed_quality += rec.fixed_quality;
        row.completion_rate += rec.timed_out ? 0.0 : 1.0;
        ++row.count;
    }
    for (auto& row : rows) {
        if (row.count == 0) continue;
        const double n = static_cast<double>(row.count);
        row.mean_energy /= n;
        row.mean_total_seconds /= n;
        row.mean_classical_seconds /= n;
        row.mean_embedding_seconds /= n;
        row.mean_quantum_seconds /= n;
        row.mean_fixed_quality /= n;
        row.completion_rate /= n;
    }
    return rows;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "problem,solver,count,mean_energy,min_energy,mean_total_seconds,"
           "mean_classical_seconds,mean_embedding_seconds,mean_quantum_seconds,"
           "mean_fixed_quality,completion_rate\n";
    for (const auto& r : rows) {
        out << r.problem << ',' << r.solver << ',' << r.count << ',' << format_double(r.mean_energy)
            << ',' << format_double(r.min_energy) << ',' << format_double(r.mean_total_seconds)
            << ',' << format_double(r.mean_classical_seconds) << ','
            << format_double(r.mean_embedding_seconds) << ','
            << format_double(r.mean_quantum_seconds) << ',' << format_double(r.mean_fixed_quality)
            << ',' << format_double(r.completion_rate) << '\n';
    }
    return out.str();
}

}  // namespace qubobench
