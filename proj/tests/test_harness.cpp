#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qubobench/errors.hpp"
#include "qubobench/harness.hpp"

using namespace qubobench;

namespace {

ExperimentSpec small_dbg_spec() {
    ExperimentSpec spec;
    spec.kind = ProblemKind::Dbg;
    spec.dbg = {5, 4, 2, 0.4, 0.1, AwardMode::Random};
    spec.solver = SolverKind::Qbsolv;
    spec.chimera_m = 4;
    spec.budget.max_clique_size = 17;
    spec.budget.num_reads = 10;
    spec.budget.anneal_sweeps = 100;
    spec.time_threshold_seconds = 60.0;
    spec.seed = 3;
    return spec;
}

ExperimentRecord strip_times(ExperimentRecord r) {
    r.total_seconds = r.classical_seconds = r.embedding_seconds = r.quantum_seconds = 0.0;
    return r;
}

const std::string kSweepConfig =
    "[experiment]\n"
    "problem = dbg\n"
    "solver = fa\n"
    "seed = 10\n"
    "time_threshold = 60\n"
    "[problem]\n"
    "layers = 4\n"
    "nodes_per_layer = 4\n"
    "range = 2\n"
    "probability = 0.4\n"
    "[solver]\n"
    "population = 250, 500\n"
    "generations = 10, 50, 100\n"
    "[backend]\n"
    "chimera_m = 4\n"
    "num_reads = 10\n"
    "sweeps = 100\n";

}  // namespace

TEST_CASE("config parsing") {
    const Config config = parse_config("# comment\n[a]\nx = 1\ny = 2, 3\n[b]\nz = hello world\n");
    REQUIRE(config.sections.size() == 2);
    CHECK(config.sections[0].name == "a");
    CHECK(*config.sections[0].find("x") == "1");
    CHECK(split_list(*config.sections[0].find("y")) == std::vector<std::string>{"2", "3"});
    CHECK(*config.find("b")->find("z") == "hello world");

    CHECK_THROWS_AS(parse_config("[unterminated\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a]\nnot an entry\n"), ConfigError);
}

TEST_CASE("spec_from_config reads every section and rejects lists") {
    const Config config = parse_config(
        "[experiment]\nproblem = tsp\nsolver = qbsolv\nseed = 9\ntime_threshold = 30\n"
        "[problem]\nn = 5\n"
        "[solver]\nnum_repeats = 3\ntabu_tenure = 7\n"
        "[backend]\nchimera_m = 4\nnum_reads = 20\nsweeps = 200\n");
    const ExperimentSpec spec = spec_from_config(config);
    CHECK(spec.kind == ProblemKind::Tsp);
    CHECK(spec.solver == SolverKind::Qbsolv);
    CHECK(spec.seed == 9);
    CHECK(spec.tsp_n == 5);
    CHECK(spec.qb.num_repeats == 3);
    CHECK(spec.qb.tabu_tenure == 7);
    CHECK(spec.chimera_m == 4);
    CHECK(spec.budget.max_clique_size == 17);  // derived from the topology
    CHECK(spec.time_threshold_seconds == 30.0);

    CHECK_THROWS_AS(spec_from_config(parse_config("[experiment]\nproblem = dbg\nseed = 1, 2\n")),
                    ConfigError);
    CHECK_THROWS_AS(spec_from_config(parse_config("[experiment]\nbogus = 1\n")), ConfigError);
    CHECK_THROWS_AS(spec_from_config(parse_config("[bogus]\nx = 1\n")), ConfigError);
}

TEST_CASE("expand_grid builds the cartesian product in file order") {
    const auto cells = expand_grid(parse_config(kSweepConfig));
    REQUIRE(cells.size() == 6);

    // Last listed key (generations) varies fastest; seeds are base + index.
    CHECK(cells[0].fa.population_size == 250);
    CHECK(cells[0].fa.num_generations == 10);
    CHECK(cells[1].fa.num_generations == 50);
    CHECK(cells[2].fa.num_generations == 100);
    CHECK(cells[3].fa.population_size == 500);
    CHECK(cells[3].fa.num_generations == 10);
    for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].seed == 10 + i);
}

TEST_CASE("run_experiment is deterministic modulo wall-clock fields") {
    const ExperimentSpec spec = small_dbg_spec();
    const ExperimentRecord a = run_experiment(spec);
    const ExperimentRecord b = run_experiment(spec);
    CHECK(strip_times(a) == strip_times(b));
    CHECK(a.graph_size == 20);
    CHECK(a.problem == "dbg");
    CHECK(a.solver == "qbsolv");
    CHECK(a.broken_constraints.has_value());
    CHECK(a.error.empty());
}

TEST_CASE("mwp records report N/A broken constraints") {
    ExperimentSpec spec;
    spec.kind = ProblemKind::Mwp;
    spec.mwp = {2, 2, 1, 4, 2, {}};
    spec.solver = SolverKind::Random;
    spec.chimera_m = 4;
    spec.budget.max_clique_size = 17;
    spec.seed = 14;
    const ExperimentRecord record = run_experiment(spec);
    CHECK(!record.broken_constraints.has_value());

    const std::string csv = records_to_csv({record});
    CHECK(csv.find(",N/A,") != std::string::npos);
    const auto back = records_from_csv(csv);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == record);
}

TEST_CASE("csv round-trips exactly") {
    const auto cells = expand_grid(parse_config(kSweepConfig));
    std::vector<ExperimentSpec> two(cells.begin(), cells.begin() + 2);
    const auto records = run_sweep(two, 1);
    const std::string csv = records_to_csv(records);
    const auto back = records_from_csv(csv);
    CHECK(back == records);

    CHECK(records_to_csv({}) == csv_header() + "\n");
    CHECK(records_from_csv(csv_header() + "\n").empty());
    CHECK_THROWS_AS(records_from_csv("bogus\n"), std::invalid_argument);
}

TEST_CASE("sweep results are independent of parallelism") {
    const auto cells = expand_grid(parse_config(kSweepConfig));
    std::vector<ExperimentSpec> grid(cells.begin(), cells.begin() + 4);
    auto serial = run_sweep(grid, 1);
    auto parallel = run_sweep(grid, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i)
        CHECK(strip_times(serial[i]) == strip_times(parallel[i]));
}

TEST_CASE("seed isolation: changing one cell's seed changes only that row") {
    const auto cells = expand_grid(parse_config(kSweepConfig));
    std::vector<ExperimentSpec> grid(cells.begin(), cells.begin() + 3);
    auto base = run_sweep(grid, 1);
    grid[1].seed += 1000;
    auto changed = run_sweep(grid, 1);
    CHECK(strip_times(base[0]) == strip_times(changed[0]));
    CHECK(strip_times(base[1]) != strip_times(changed[1]));
    CHECK(strip_times(base[2]) == strip_times(changed[2]));
}

TEST_CASE("per-cell failures are recorded and the sweep continues") {
    ExperimentSpec bad = small_dbg_spec();
    bad.dbg.number_of_layers = 0;  // generator rejects this
    const auto records = run_sweep({bad, small_dbg_spec()}, 1);
    REQUIRE(records.size() == 2);
    CHECK(!records[0].error.empty());
    CHECK(records[1].error.empty());

    // Errored records round-trip through the CSV too.
    const auto back = records_from_csv(records_to_csv(records));
    CHECK(back == records);
}

TEST_CASE("timeouts are honored and flagged") {
    ExperimentSpec spec = small_dbg_spec();
    spec.dbg = {10, 10, 3, 0.3, 0.1, AwardMode::Random};
    spec.time_threshold_seconds = 1e-9;
    const ExperimentRecord record = run_experiment(spec);
    CHECK(record.timed_out);

    spec.time_threshold_seconds = 0.0;
    CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

TEST_CASE("summarize groups by problem and solver") {
    ExperimentRecord r1;
    r1.problem = "dbg";
    r1.solver = "fa";
    r1.solution_energy = -4.0;
    r1.total_seconds = 2.0;
    r1.fixed_quality = 10.0;

    // A single record summarizes to itself.
    const auto single = summarize({r1});
    REQUIRE(single.size() == 1);
    CHECK(single[0].count == 1);
    CHECK(single[0].mean_energy == -4.0);
    CHECK(single[0].min_energy == -4.0);
    CHECK(single[0].mean_total_seconds == 2.0);
    CHECK(single[0].mean_fixed_quality == 10.0);
    CHECK(single[0].completion_rate == 1.0);

    ExperimentRecord r2 = r1;
    r2.solution_energy = -8.0;
    r2.total_seconds = 4.0;
    r2.timed_out = true;
    ExperimentRecord other = r1;
    other.solver = "ich";

    const auto rows = summarize({r1, r2, other});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].problem == "dbg");
    CHECK(rows[0].solver == "fa");
    CHECK(rows[0].count == 2);
    CHECK(rows[0].mean_energy == -6.0);
    CHECK(rows[0].min_energy == -8.0);
    CHECK(rows[0].mean_total_seconds == 3.0);
    CHECK(rows[0].completion_rate == 0.5);
    CHECK(rows[1].solver == "ich");

    // All timed out: completion rate zero.
    ExperimentRecord t1 = r1;
    t1.timed_out = true;
    const auto timed = summarize({t1});
    CHECK(timed[0].completion_rate == 0.0);

    const std::string csv = summary_to_csv(rows);
    CHECK(csv.find("dbg,fa,2,") != std::string::npos);
}

TEST_CASE("summary means match a direct recomputation over the records") {
    const auto cells = expand_grid(parse_config(kSweepConfig));
    const auto records = run_sweep({cells[0], cells[1], cells[2]}, 1);
    const auto rows = summarize(records);
    REQUIRE(rows.size() == 1);
    double mean_e = 0.0, mean_q = 0.0;
    for (const auto& r : records) {
        mean_e += r.solution_energy;
        mean_q += r.fixed_quality;
    }
    CHECK(rows[0].mean_energy == doctest::Approx(mean_e / 3.0).epsilon(1e-12));
    CHECK(rows[0].mean_fixed_quality == doctest::Approx(mean_q / 3.0).epsilon(1e-12));
    CHECK(rows[0].count == 3);
}
