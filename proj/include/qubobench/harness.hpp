#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qubobench/annealer.hpp"
#include "qubobench/config.hpp"
#include "qubobench/problems.hpp"
#include "qubobench/solvers.hpp"

namespace qubobench {

/// One experiment: a problem (with generator parameters), a solver (with its
/// parameters), a backend budget and the wall-clock threshold.
struct ExperimentSpec {
    ProblemKind kind = ProblemKind::Dbg;
    DbgParams dbg;
    int tsp_n = 6;
    std::string tsplib_path;  // when set, the TSP instance is loaded from file
    ScaGenParams sca;
    MwpGenParams mwp;

    SolverKind solver = SolverKind::Random;
    FaParams fa;
    QbParams qb;

    int chimera_m = 16;
    SubSolverBudget budget;
    double time_threshold_seconds = 1800.0;
    std::uint64_t seed = 0;

    std::string problem_params_string() const;
};

struct ExperimentRecord {
    std::string problem;
    std::string problem_params;
    std::string solver;
    std::string solver_params;
    std::uint64_t seed = 0;
    long long graph_size = 0;
    double edge_density = 0.0;
    double total_seconds = 0.0;
    double classical_seconds = 0.0;
    double embedding_seconds = 0.0;
    double quantum_seconds = 0.0;
    double solution_energy = 0.0;
    std::optional<long long> broken_constraints;  // absent = N/A (MWP)
    double fixed_quality = 0.0;
    bool timed_out = false;
    long long subproblems = 0;
    std::string error;

    bool operator==(const ExperimentRecord&) const = default;
};

ProblemInstance generate_instance(const ExperimentSpec& spec);

SolveReport dispatch_solver(const ExperimentSpec& spec, const Qubo& qubo,
                            const AnnealerBackend& backend);

/// Generates, solves and evaluates one experiment. Deterministic under the
/// spec's seed except for the wall-clock fields (reported in seconds at
/// millisecond resolution).
ExperimentRecord run_experiment(const ExperimentSpec& spec);

/// Reads a scalar experiment from a config ([experiment], [problem],
/// [solver], [backend] sections). Throws ConfigError on list values.
ExperimentSpec spec_from_config(const Config& config);

/// Expands comma-separated list values into the Cartesian grid, in file
/// order with the last listed key varying fastest. Cell seeds are the base
/// seed plus the cell index.
std::vector<ExperimentSpec> expand_grid(const Config& config);

/// Runs cells with up to `parallelism` worker threads. Each cell is fully
/// isolated; per-cell failures are recorded in the record's error field and
/// the sweep continues. Results come back in grid order.
std::vector<ExperimentRecord> run_sweep(const std::vector<ExperimentSpec>& cells, int parallelism);

// ---- CSV (fixed, versioned columns; round-trips exactly) ----

inline constexpr int kCsvSchemaVersion = 1;
std::string csv_header();
std::string records_to_csv(const std::vector<ExperimentRecord>& records);
std::vector<ExperimentRecord> records_from_csv(const std::string& text);

// ---- summary ----

struct SummaryRow {
    std::string problem;
    std::string solver;
    long long count = 0;
    double mean_energy = 0.0;
    double min_energy = 0.0;
    double mean_total_seconds = 0.0;
    double mean_classical_seconds = 0.0;
    double mean_embedding_seconds = 0.0;
    double mean_quantum_seconds = 0.0;
    double mean_fixed_quality = 0.0;
    double completion_rate = 0.0;  // fraction finished within the threshold
};

/// Groups by (problem, solver) in first-appearance order. Rows with a
/// recorded error are excluded.
std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace qubobench
