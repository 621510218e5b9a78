#include "qubobench/qubo.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "qubobench/errors.hpp"

namespace qubobench {

Qubo::Qubo(int num_vars, double offset) : num_vars_(num_vars), offset_(offset) {
    if (num_vars < 0) throw std::invalid_argument("qubo: negative variable count");
}

void Qubo::check_index(int i) const {
    if (i < 0 || i >= num_vars_) throw std::invalid_argument("qubo: variable index out of range");
}

void Qubo::add_linear(int i, double v) {
    check_index(i);
    if (v == 0.0) return;
    auto [it, inserted] = linear_.try_emplace(i, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0.0) linear_.erase(it);
    }
}

void Qubo::add_quadratic(int i, int j, double v) {
    check_index(i);
    check_index(j);
    if (i == j) throw std::invalid_argument("qubo: self-coupling is not allowed");
    if (v == 0.0) return;
    PairKey key{std::min(i, j), std::max(i, j)};
    auto [it, inserted] = quadratic_.try_emplace(key, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0.0) quadratic_.erase(it);
    }
}

double Qubo::linear(int i) const {
    check_index(i);
    auto it = linear_.find(i);
    return it == linear_.end() ? 0.0 : it->second;
}

double Qubo::quadratic(int i, int j) const {
    check_index(i);
    check_index(j);
    auto it = quadratic_.find({std::min(i, j), std::max(i, j)});
    return it == quadratic_.end() ? 0.0 : it->second;
}

double Qubo::energy(std::span<const std::uint8_t> bits) const {
    if (static_cast<int>(bits.size()) != num_vars_)
        throw std::invalid_argument("qubo: bit vector length does not match variable count");
    double e = offset_;
    for (const auto& [i, a] : linear_)
        if (bits[i]) e += a;
    for (const auto& [key, b] : quadratic_)
        if (bits[key.first] && bits[key.second]) e += b;
    return e;
}

double Qubo::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [i, a] : linear_) m = std::max(m, std::abs(a));
    for (const auto& [key, b] : quadratic_) m = std::max(m, std::abs(b));
    return m;
}

double Qubo::edge_density() const {
    if (num_vars_ < 2) throw std::invalid_argument("edge_density: needs at least two variables");
    const double possible = static_cast<double>(num_vars_) * (num_vars_ - 1) / 2.0;
    return static_cast<double>(quadratic_.size()) / possible;
}

std::vector<int> Qubo::neighbors(int i) const {
    check_index(i);
    std::vector<int> out;
    for (const auto& [key, b] : quadratic_) {
        (void)b;
        if (key.first == i) out.push_back(key.second);
        else if (key.second == i) out.push_back(key.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<int>> Qubo::adjacency() const {
    std::vector<std::vector<int>> adj(num_vars_);
    for (const auto& [key, b] : quadratic_) {
        (void)b;
        adj[key.first].push_back(key.second);
        adj[key.second].push_back(key.first);
    }
    for (auto& row : adj) std::sort(row.begin(), row.end());
    return adj;
}

int Qubo::max_degree_node() const {
    if (num_vars_ == 0) throw EmptyGraph("max_degree_node: qubo has no variables");
    std::vector<int> degree(num_vars_, 0);
    for (const auto& [key, b] : quadratic_) {
        (void)b;
        ++degree[key.first];
        ++degree[key.second];
    }
    int best = 0;
    for (int i = 1; i < num_vars_; ++i)
        if (degree[i] > degree[best]) best = i;
    return best;
}

std::vector<int> Qubo::active_variables() const {
    std::vector<bool> seen(num_vars_, false);
    for (const auto& [i, a] : linear_) {
        (void)a;
        seen[i] = true;
    }
    for (const auto& [key, b] : quadratic_) {
        (void)b;
        seen[key.first] = seen[key.second] = true;
    }
    std::vector<int> out;
    for (int i = 0; i < num_vars_; ++i)
        if (seen[i]) out.push_back(i);
    return out;
}

Qubo Qubo::fixed(int i, bool value) const {
    check_index(i);
    Qubo out(num_vars_ - 1, offset_);
    auto reindex = [i](int j) { return j > i ? j - 1 : j; };
    for (const auto& [j, a] : linear_) {
        if (j == i) {
            if (value) out.add_offset(a);
        } else {
            out.add_linear(reindex(j), a);
        }
    }
    for (const auto& [key, b] : quadratic_) {
        const auto [p, q] = key;
        if (p == i) {
            if (value) out.add_linear(reindex(q), b);
        } else if (q == i) {
            if (value) out.add_linear(reindex(p), b);
        } else {
            out.add_quadratic(reindex(p), reindex(q), b);
        }
    }
    return out;
}

bool assignment_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    // Compare as binary words with index 0 as the least significant bit.
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t idx = n; idx-- > 0;) {
        const int av = idx < a.size() ? a[idx] : 0;
        const int bv = idx < b.size() ? b[idx] : 0;
        if (av != bv) return av < bv;
    }
    return false;
}

ReducedQubo ReducedQubo::whole(Qubo q) {
    ReducedQubo out;
    out.index_map.resize(q.num_vars());
    for (int i = 0; i < q.num_vars(); ++i) out.index_map[i] = i;
    out.qubo = std::move(q);
    return out;
}

int ReducedQubo::local_of(int original_index) const {
    auto it = std::lower_bound(index_map.begin(), index_map.end(), original_index);
    if (it == index_map.end() || *it != original_index) return -1;
    return static_cast<int>(it - index_map.begin());
}

void ReducedQubo::fix(int original_index, bool value) {
    const int local = local_of(original_index);
    if (local < 0) throw std::invalid_argument("reduced qubo: variable already fixed or unknown");
    qubo = qubo.fixed(local, value);
    index_map.erase(index_map.begin() + local);
    fixed[original_index] = value ? 1 : 0;
}

std::vector<std::uint8_t> ReducedQubo::expand(std::span<const std::uint8_t> completion) const {
    if (completion.size() != index_map.size())
        throw std::invalid_argument("reduced qubo: completion length mismatch");
    std::vector<std::uint8_t> full(original_num_vars(), 0);
    for (std::size_t local = 0; local < index_map.size(); ++local)
        full[index_map[local]] = completion[local];
    for (const auto& [orig, bit] : fixed) full[orig] = bit;
    return full;
}

ReducedQubo clamp_subqubo(const Qubo& qubo, std::span<const int> subset,
                          std::span<const std::uint8_t> context) {
    if (subset.empty()) throw std::invalid_argument("clamp_subqubo: empty subset");
    if (static_cast<int>(context.size()) != qubo.num_vars())
        throw std::invalid_argument("clamp_subqubo: context length mismatch");
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] >= qubo.num_vars())
            throw std::invalid_argument("clamp_subqubo: subset index out of range");
        if (i > 0 && subset[i] <= subset[i - 1])
            throw std::invalid_argument("clamp_subqubo: subset must be strictly ascending");
    }

    std::vector<int> local_of(qubo.num_vars(), -1);
    for (std::size_t local = 0; local < subset.size(); ++local) local_of[subset[local]] = static_cast<int>(local);

    ReducedQubo out;
    out.index_map.assign(subset.begin(), subset.end());
    out.qubo = Qubo(static_cast<int>(subset.size()), qubo.offset());
    for (int i = 0; i < qubo.num_vars(); ++i)
        if (local_of[i] < 0) out.fixed[i] = context[i];

    for (const auto& [i, a] : qubo.linear_terms()) {
        if (local_of[i] >= 0) out.qubo.add_linear(local_of[i], a);
        else if (context[i]) out.qubo.add_offset(a);
    }
    for (const auto& [key, b] : qubo.quadratic_terms()) {
        const auto [p, q] = key;
        const int lp = local_of[p], lq = local_of[q];
        if (lp >= 0 && lq >= 0) {
            out.qubo.add_quadratic(lp, lq, b);
        } else if (lp >= 0) {
            if (context[q]) out.qubo.add_linear(lp, b);
        } else if (lq >= 0) {
            if (context[p]) out.qubo.add_linear(lq, b);
        } else if (context[p] && context[q]) {
            out.qubo.add_offset(b);
        }
    }
    return out;
}

CompiledQubo CompiledQubo::from(const Qubo& q) {
    CompiledQubo out;
    out.n = q.num_vars();
    out.offset = q.offset();
    out.bias.assign(out.n, 0.0);
    for (const auto& [i, a] : q.linear_terms()) out.bias[i] = a;

    std::vector<int> degree(out.n, 0);
    for (const auto& [key, b] : q.quadratic_terms()) {
        (void)b;
        ++degree[key.first];
        ++degree[key.second];
    }
    out.adj_start.assign(out.n + 1, 0);
    for (int i = 0; i < out.n; ++i) out.adj_start[i + 1] = out.adj_start[i] + degree[i];
    out.adj_index.resize(out.adj_start[out.n]);
    out.adj_weight.resize(out.adj_start[out.n]);
    std::vector<int> cursor(out.adj_start.begin(), out.adj_start.end() - 1);
    for (const auto& [key, b] : q.quadratic_terms()) {
        const auto [p, qq] = key;
        out.adj_index[cursor[p]] = qq;
        out.adj_weight[cursor[p]++] = b;
        out.adj_index[cursor[qq]] = p;
        out.adj_weight[cursor[qq]++] = b;
    }
    return out;
}

double CompiledQubo::energy(std::span<const std::uint8_t> bits) const {
    double e = offset;
    for (int i = 0; i < n; ++i) {
        if (!bits[i]) continue;
        e += bias[i];
        for (int a = adj_start[i]; a < adj_start[i + 1]; ++a) {
            const int j = adj_index[a];
            if (j > i && bits[j]) e += adj_weight[a];
        }
    }
    return e;
}

double CompiledQubo::flip_delta(std::span<const std::uint8_t> bits, int i) const {
    double field = bias[i];
    for (int a = adj_start[i]; a < adj_start[i + 1]; ++a)
        if (bits[adj_index[a]]) field += adj_weight[a];
    return bits[i] ? -field : field;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("malformed number: " + s);
    return v;
}

std::string Qubo::to_text() const {
    std::ostringstream out;
    out << "N " << num_vars_ << ' ' << format_double(offset_) << '\n';
    for (const auto& [i, a] : linear_) out << "L " << i << ' ' << format_double(a) << '\n';
    for (const auto& [key, b] : quadratic_)
        out << "Q " << key.first << ' ' << key.second << ' ' << format_double(b) << '\n';
    return out.str();
}

Qubo Qubo::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    if (!(in >> tag) || tag != "N") throw std::invalid_argument("qubo parse: missing N header");
    int n = 0;
    std::string offset_str;
    if (!(in >> n >> offset_str)) throw std::invalid_argument("qubo parse: malformed header");
    Qubo out(n, parse_double(offset_str));
    while (in >> tag) {
        if (tag == "L") {
            int i;
            std::string v;
            if (!(in >> i >> v)) throw std::invalid_argument("qubo parse: malformed L line");
            out.add_linear(i, parse_double(v));
        } else if (tag == "Q") {
            int i, j;
            std::string v;
            if (!(in >> i >> j >> v)) throw std::invalid_argument("qubo parse: malformed Q line");
            out.add_quadratic(i, j, parse_double(v));
        } else {
            throw std::invalid_argument("qubo parse: unknown line tag " + tag);
        }
    }
    return out;
}

}  // namespace qubobench
