#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qubobench/qubo.hpp"
#include "qubobench/rng.hpp"

namespace qubobench::test {

/// Random QUBO with dyadic coefficients (multiples of 1/4 in [-8, 8], never
/// zero), so that every sum arising in the fixing/clamping algebra is exactly
/// representable and equalities can be asserted without tolerance.
inline Qubo random_dyadic_qubo(int n, double density, std::uint64_t seed) {
    Rng rng(seed);
    Qubo q(n);
    auto coeff = [&rng] {
        int v = 0;
        while (v == 0) v = rng.uniform_int(-32, 32);
        return v / 4.0;
    };
    for (int i = 0; i < n; ++i) q.add_linear(i, coeff());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.bernoulli(density)) q.add_quadratic(i, j, coeff());
    return q;
}

inline std::vector<std::uint8_t> bits_of(std::uint32_t word, int n) {
    std::vector<std::uint8_t> bits(n);
    for (int i = 0; i < n; ++i) bits[i] = (word >> i) & 1u;
    return bits;
}

/// Independent brute-force minimum: direct full energy evaluation of every
/// assignment, no incremental updates shared with the library path.
inline Solution brute_force_min(const Qubo& q) {
    const int n = q.num_vars();
    Solution best;
    best.bits = bits_of(0, n);
    best.energy = q.energy(best.bits);
    for (std::uint32_t word = 1; word < (1u << n); ++word) {
        const auto bits = bits_of(word, n);
        const double e = q.energy(bits);
        if (e < best.energy) best = {bits, e};
    }
    return best;
}

inline std::vector<double> ranks_with_ties(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks_with_ties(x);
    const auto ry = ranks_with_ties(y);
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace qubobench::test
