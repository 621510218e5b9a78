#include "qubobench/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qubobench/rng.hpp"

namespace qubobench {

namespace {

std::vector<std::array<double, 2>> layout_impl(const std::vector<std::vector<int>>& adjacency,
                                               int iterations, std::uint64_t seed, bool parallel) {
    const int n = static_cast<int>(adjacency.size());
    if (n == 0) throw std::invalid_argument("spring_layout: empty graph");
    if (iterations < 1) throw std::invalid_argument("spring_layout: iterations must be positive");

    Rng rng(seed);
    std::vector<std::array<double, 2>> pos(n);
    for (auto& p : pos) {
        p[0] = rng.next_double();
        p[1] = rng.next_double();
    }
    if (n == 1) return pos;

    const double k = std::sqrt(1.0 / n);
    const double k2 = k * k;
    double temp = 0.1;
    const double dt = temp / (iterations + 1);
    constexpr double kMinDist = 1e-9;

    std::vector<std::array<double, 2>> disp(n);
    for (int iter = 0; iter < iterations; ++iter) {
#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < n; ++i) {
            double dx = 0.0, dy = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double ex = pos[i][0] - pos[j][0];
                const double ey = pos[i][1] - pos[j][1];
                const double dist = std::max(std::sqrt(ex * ex + ey * ey), kMinDist);
                const double rep = k2 / (dist * dist);
                dx += ex * rep;
                dy += ey * rep;
            }
            for (int j : adjacency[i]) {
                const double ex = pos[i][0] - pos[j][0];
                const double ey = pos[i][1] - pos[j][1];
                const double dist = std::max(std::sqrt(ex * ex + ey * ey), kMinDist);
                const double att = dist / k;
                dx -= ex * att;
                dy -= ey * att;
            }
            disp[i] = {dx, dy};
        }
        for (int i = 0; i < n; ++i) {
            const double len = std::max(std::sqrt(disp[i][0] * disp[i][0] + disp[i][1] * disp[i][1]),
                                        kMinDist);
            const double step = std::min(len, temp) / len;
            pos[i][0] += disp[i][0] * step;
            pos[i][1] += disp[i][1] * step;
        }
        temp -= dt;
    }
    return pos;
}

}  // namespace

std::vector<std::array<double, 2>> spring_layout(const std::vector<std::vector<int>>& adjacency,
                                                 int iterations, std::uint64_t seed) {
    return layout_impl(adjacency, iterations, seed, true);
}

std::vector<std::array<double, 2>> spring_layout_serial(
    const std::vector<std::vector<int>>& adjacency, int iterations, std::uint64_t seed) {
    return layout_impl(adjacency, iterations, seed, false);
}

std::vector<double> pca_primary_axis(const std::vector<std::array<double, 2>>& coords) {
    const int n = static_cast<int>(coords.size());
    if (n < 2) throw std::invalid_argument("pca_primary_axis: needs at least two points");

    double mx = 0.0, my = 0.0;
    for (const auto& p : coords) {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : coords) {
        const double x = p[0] - mx, y = p[1] - my;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    sxx /= n;
    sxy /= n;
    syy /= n;

    const double trace = sxx + syy;
    std::vector<double> out(n);
    if (trace <= 1e-300) {
        for (int i = 0; i < n; ++i) out[i] = i;  // degenerate layout
        return out;
    }

    const double half_diff = (sxx - syy) / 2.0;
    const double lambda = trace / 2.0 + std::sqrt(half_diff * half_diff + sxy * sxy);
    double vx, vy;
    if (std::abs(sxy) > 1e-15 * trace) {
        vx = sxy;
        vy = lambda - sxx;
    } else {
        vx = sxx >= syy ? 1.0 : 0.0;
        vy = sxx >= syy ? 0.0 : 1.0;
    }
    const double norm = std::sqrt(vx * vx + vy * vy);
    vx /= norm;
    vy /= norm;

    for (int i = 0; i < n; ++i)
        out[i] = (coords[i][0] - mx) * vx + (coords[i][1] - my) * vy;
    if (out[0] < 0.0)
        for (double& v : out) v = -v;
    return out;
}

}  // namespace qubobench
