#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qubobench {

struct LayoutCoords {
    std::vector<std::array<double, 2>> positions;
    std::vector<double> principal;  // 1D coordinate after projection
};

/// Fruchterman-Reingold force-directed layout on the unit square with
/// k = sqrt(1/N), repulsion k^2/d between all pairs, attraction d^2/k along
/// edges and a linearly cooling displacement cap. Deterministic under seed.
/// The default entry point parallelizes the per-node force accumulation with
/// OpenMP; the serial variant is the reference implementation and produces
/// bit-identical coordinates.
std::vector<std::array<double, 2>> spring_layout(const std::vector<std::vector<int>>& adjacency,
                                                 int iterations, std::uint64_t seed);
std::vector<std::array<double, 2>> spring_layout_serial(
    const std::vector<std::vector<int>>& adjacency, int iterations, std::uint64_t seed);

/// Mean-centered projection onto the top eigenvector of the 2x2 covariance
/// matrix. The sign is fixed so node 0 has non-negative coordinate. A
/// degenerate (zero-covariance) layout falls back to node-index order.
std::vector<double> pca_primary_axis(const std::vector<std::array<double, 2>>& coords);

}  // namespace qubobench
