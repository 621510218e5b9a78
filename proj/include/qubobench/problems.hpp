#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qubobench/qubo.hpp"

namespace qubobench {

enum class ProblemKind { Dbg, Tsp, Sca, Mwp };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Deep Boltzmann Graph: layered random QUBO with time-domain structure.
// ---------------------------------------------------------------------------

enum class AwardMode { Constant, Random };

struct DbgParams {
    int number_of_layers = 25;
    int nodes_per_layer = 20;
    int max_connectivity_range_layer = 1;
    double connectivity_probability = 0.1;
    double average_node_value = 0.1;
    AwardMode optimization_type = AwardMode::Constant;
};

struct DbgMeta : DbgParams {
    std::vector<double> award;  // per node; node bias is its negation
};

// ---------------------------------------------------------------------------
// Symmetric TSP, one-hot position encoding with one-hot penalties per vertex
// and per position plus cyclic tour-length terms.
// ---------------------------------------------------------------------------

struct TspMeta {
    int n = 0;
    std::vector<double> distances;  // row-major n x n, symmetric, zero diagonal
    double penalty_a = 0.0;
    double penalty_b = 1.0;

    double distance(int i, int j) const { return distances[static_cast<std::size_t>(i) * n + j]; }
    double max_distance() const;
};

// ---------------------------------------------------------------------------
// Satellite sub-constellation assignment as a weighted k-clique problem on
// the disjointness graph of candidate sub-constellations.
// ---------------------------------------------------------------------------

struct ScaNode {
    std::vector<int> satellites;  // sorted
    double weight = 0.0;
};

struct ScaMeta {
    int n_satellites = 0;
    int k = 0;
    double penalty = 0.0;
    std::vector<ScaNode> nodes;

    bool disjoint(int a, int b) const;
};

struct ScaGenParams {
    int n_satellites = 6;
    std::vector<int> allowed_sizes = {3};
    int k = 2;
    double threshold_percentile = 0.0;  // in [0, 100)
};

// ---------------------------------------------------------------------------
// Maintenance workload problem: repairs scheduled at capable facilities, one
// binary variable per feasible (repair, facility, start-week) triple.
// ---------------------------------------------------------------------------

struct MwpRepair {
    int origin = 0, destination = 0;
    int release_week = 0, due_week = 0;
    int type = 0;
    double value = 0.0;
};

struct MwpFacility {
    double weekly_capacity_hours = 0.0;
    std::vector<int> duration_weeks;      // per type; -1 when the type is not offered
    std::vector<double> repair_cost;      // per type
    std::vector<double> hours_per_week;   // per type
    std::vector<double> ship_cost;        // per location
    std::vector<int> ship_weeks;          // per location
};

struct MwpTriple {
    int repair = 0, facility = 0, start_week = 0;
};

struct MwpMeta {
    std::vector<MwpRepair> repairs;
    std::vector<MwpFacility> facilities;
    int num_weeks = 0, num_locations = 0, num_types = 0;
    std::vector<MwpTriple> variable_index;          // variable v = variable_index[v]
    std::array<double, 4> constraint_weights{};     // w1 one-hot, w2 capacity, w3 cost, w4 value

    /// First occupied week (arrival at the facility) of a triple.
    int arrival_week(const MwpTriple& t) const;
    int duration(const MwpTriple& t) const;
    /// Shipping + repair cost of performing the repair through this triple.
    double triple_cost(const MwpTriple& t) const;
};

struct MwpGenParams {
    int num_repairs = 4;
    int num_facilities = 2;
    int num_types = 2;
    int num_weeks = 6;
    int num_locations = 3;
    std::array<double, 4> weights{};  // zeros select the documented defaults
};

// ---------------------------------------------------------------------------

struct ProblemInstance {
    Qubo qubo;
    ProblemKind kind = ProblemKind::Dbg;
    std::uint64_t seed = 0;
    std::variant<DbgMeta, TspMeta, ScaMeta, MwpMeta> meta;

    const DbgMeta& dbg() const { return std::get<DbgMeta>(meta); }
    const TspMeta& tsp() const { return std::get<TspMeta>(meta); }
    const ScaMeta& sca() const { return std::get<ScaMeta>(meta); }
    const MwpMeta& mwp() const { return std::get<MwpMeta>(meta); }
};

// ---- generators (pure functions of parameters and seed) ----

ProblemInstance gen_dbg(const DbgParams& params, std::uint64_t seed);

/// Symmetric matrix with off-diagonal entries uniform on [1, 10].
std::vector<double> gen_tsp_random(int n, std::uint64_t seed);

/// Fills the documented default penalties: penalty_b = 1 and
/// penalty_a = 2 * n * max_distance.
TspMeta make_tsp_meta(int n, std::vector<double> distances);

ProblemInstance tsp_to_qubo(TspMeta meta, std::uint64_t seed);

ProblemInstance gen_sca(const ScaGenParams& params, std::uint64_t seed);

/// Synthetic instance sampler; the returned meta has no variable index yet.
MwpMeta sample_mwp_meta(const MwpGenParams& params, std::uint64_t seed);

/// Builds the feasible-triple variable index and the weighted QUBO. Zero
/// weights select the defaults w1 = w2 = 10 * max repair value, w3 = w4 = 1.
ProblemInstance gen_mwp(MwpMeta meta, std::array<double, 4> weights, std::uint64_t seed);

// ---- decoding, broken-constraint counting, repair, fixed quality ----

long long count_broken_dbg(const Qubo& qubo, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> repair_dbg(const Qubo& qubo, const DbgMeta& meta,
                                     std::span<const std::uint8_t> bits);
double dbg_quality(const DbgMeta& meta, std::span<const std::uint8_t> bits);

long long count_broken_tsp(const TspMeta& meta, std::span<const std::uint8_t> bits);
/// Always returns a valid tour (a permutation: tour[p] = vertex at position p).
std::vector<int> repair_tsp(const TspMeta& meta, std::span<const std::uint8_t> bits);
double tour_length(const TspMeta& meta, const std::vector<int>& tour);
/// Decodes a feasible solution directly; nullopt when constraints are broken.
std::optional<std::vector<int>> decode_tsp(const TspMeta& meta, std::span<const std::uint8_t> bits);

long long count_broken_sca(const ScaMeta& meta, std::span<const std::uint8_t> bits);
struct ScaRepairResult {
    std::vector<int> selection;  // ascending node indices
    double coverage = 0.0;
    bool shortfall = false;  // could not reach exactly k disjoint nodes
};
ScaRepairResult repair_sca(const ScaMeta& meta, std::span<const std::uint8_t> bits);

/// Sum of (value - cost) over repairs scheduled exactly once within capacity.
double mwp_quality(const MwpMeta& meta, std::span<const std::uint8_t> bits);

/// Uniform harness-facing evaluation: broken-constraint count (absent for
/// MWP, mirroring the N/A reporting convention) and post-repair quality.
struct Evaluation {
    std::optional<long long> broken;
    double fixed_quality = 0.0;
    bool shortfall = false;
};
Evaluation evaluate_instance(const ProblemInstance& instance, std::span<const std::uint8_t> bits);

/// True when larger fixed_quality is better for this problem kind (TSP tour
/// length is better when smaller).
bool quality_is_maximized(ProblemKind kind);

// ---- instance persistence: qubo text plus a key = value sidecar ----

std::string instance_meta_to_text(const ProblemInstance& instance);
ProblemInstance instance_from_text(const std::string& qubo_text, const std::string& meta_text);

// ---- TSPLIB (EUC_2D and EXPLICIT full/upper-row matrices) ----

struct TspMatrix {
    int n = 0;
    std::vector<double> distances;
};
TspMatrix load_tsplib(const std::string& text);

}  // namespace qubobench
