#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qubobench {

/// Sparse symmetric quadratic binary objective
///
///   E(x) = offset + sum_i a_i x_i + sum_{i<j} b_ij x_i x_j,  x_i in {0,1}.
///
/// Couplings are stored once under the canonical key (i, j) with i < j, and
/// coefficients that cancel to exactly zero are pruned, so the quadratic map
/// doubles as the problem graph (edge_density, degrees, adjacency).
class Qubo {
public:
    using PairKey = std::pair<int, int>;

    Qubo() = default;
    explicit Qubo(int num_vars, double offset = 0.0);

    int num_vars() const { return num_vars_; }
    double offset() const { return offset_; }
    void set_offset(double v) { offset_ = v; }
    void add_offset(double v) { offset_ += v; }

    /// Accumulates into the bias of variable i; erases the entry if the
    /// result is exactly zero.
    void add_linear(int i, double v);
    /// Accumulates into the coupling of the unordered pair {i, j}, i != j.
    void add_quadratic(int i, int j, double v);

    double linear(int i) const;
    double quadratic(int i, int j) const;

    const std::map<int, double>& linear_terms() const { return linear_; }
    const std::map<PairKey, double>& quadratic_terms() const { return quadratic_; }

    std::size_t num_couplings() const { return quadratic_.size(); }

    double energy(std::span<const std::uint8_t> bits) const;

    /// Largest absolute coefficient over biases and couplings (0 if none).
    double max_abs_coefficient() const;

    /// |edges| / (N (N-1) / 2). Requires num_vars >= 2.
    double edge_density() const;

    /// Sorted neighbor indices of i in the problem graph.
    std::vector<int> neighbors(int i) const;
    /// Neighbor lists for all variables in one pass.
    std::vector<std::vector<int>> adjacency() const;
    /// Highest-degree node; ties broken by lowest index. Throws EmptyGraph
    /// when no variables exist.
    int max_degree_node() const;

    /// Variables appearing in at least one term, ascending.
    std::vector<int> active_variables() const;

    /// Removes variable i after assigning it `value`. Remaining variables are
    /// reindexed densely, preserving order. Fixing to 1 adds a_i to the offset
    /// and folds each coupling b_ij into neighbor bias a_j; fixing to 0 drops
    /// the variable's terms unchanged.
    Qubo fixed(int i, bool value) const;

    /// Line-oriented text form: `N <num_vars> <offset>` then `L <i> <bias>`
    /// and `Q <i> <j> <coupling>` lines. Doubles render with shortest
    /// round-trip precision, so serialize/parse is bit-exact.
    std::string to_text() const;
    static Qubo from_text(const std::string& text);

    bool operator==(const Qubo& other) const = default;

private:
    void check_index(int i) const;

    int num_vars_ = 0;
    double offset_ = 0.0;
    std::map<int, double> linear_;
    std::map<PairKey, double> quadratic_;
};

/// Assignment of one bit per logical variable plus its cached energy.
struct Solution {
    std::vector<std::uint8_t> bits;
    double energy = 0.0;

    bool operator==(const Solution& other) const = default;
};

/// Orders assignments by the value of the binary word with bits[0] as the
/// least significant bit. Used everywhere a deterministic tie-break between
/// equal-energy assignments is needed.
bool assignment_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// A Qubo over a surviving subset of an original problem's variables,
/// together with the bookkeeping to map local solutions back. The offset of
/// `qubo` accounts for all energy contributed by the fixed variables.
struct ReducedQubo {
    Qubo qubo;
    std::vector<int> index_map;          // local index -> original index, ascending
    std::map<int, std::uint8_t> fixed;   // original index -> assigned bit

    static ReducedQubo whole(Qubo q);

    int original_num_vars() const { return static_cast<int>(index_map.size() + fixed.size()); }

    /// Local index of an original variable, or -1 if it has been fixed.
    int local_of(int original_index) const;

    /// Fixes a surviving variable (addressed by original index), folding its
    /// influence into the reduced qubo.
    void fix(int original_index, bool value);

    /// Expands a completion over the surviving variables into a full-length
    /// bit vector over the original variables.
    std::vector<std::uint8_t> expand(std::span<const std::uint8_t> completion) const;
};

/// Sub-QUBO over `subset` obtained by fixing every variable outside `subset`
/// to its value in `context`, so that for every sub-assignment s
///
///   energy_of(sub, s) == energy_of(full, context overwritten on subset by s).
///
/// `subset` must be non-empty, strictly ascending and in range.
ReducedQubo clamp_subqubo(const Qubo& qubo, std::span<const int> subset,
                          std::span<const std::uint8_t> context);

/// Flat adjacency (CSR) snapshot of a Qubo for hot loops: O(1) access to the
/// bias and neighbor couplings of each variable. Each coupling is stored in
/// both directions.
struct CompiledQubo {
    int n = 0;
    double offset = 0.0;
    std::vector<double> bias;
    std::vector<int> adj_start;   // size n + 1
    std::vector<int> adj_index;
    std::vector<double> adj_weight;

    static CompiledQubo from(const Qubo& q);

    double energy(std::span<const std::uint8_t> bits) const;

    /// Energy change of flipping bit i under the given assignment.
    double flip_delta(std::span<const std::uint8_t> bits, int i) const;
};

std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace qubobench
