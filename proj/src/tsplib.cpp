#include <array>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qubobench/errors.hpp"
#include "qubobench/problems.hpp"

namespace qubobench {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// TSPLIB nearest-integer Euclidean distance.
double euc_2d(double x1, double y1, double x2, double y2) {
    const double dx = x1 - x2, dy = y1 - y2;
    return std::floor(std::sqrt(dx * dx + dy * dy) + 0.5);
}

}  // namespace

TspMatrix load_tsplib(const std::string& text) {
    std::istringstream in(text);
    std::string line;

    int n = 0;
    std::string weight_type, weight_format;
    std::vector<std::array<double, 2>> coords;
    std::vector<double> weights;

    enum class Section { None, Coords, Weights } section = Section::None;

    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "EOF") break;

        const auto colon = t.find(':');
        const bool is_keyword = colon != std::string::npos ||
                                t == "NODE_COORD_SECTION" || t == "EDGE_WEIGHT_SECTION" ||
                                t == "DISPLAY_DATA_SECTION";
        if (is_keyword) {
            const std::string key = trim(colon == std::string::npos ? t : t.substr(0, colon));
            const std::string value = colon == std::string::npos ? "" : trim(t.substr(colon + 1));
            if (key == "DIMENSION") {
                n = std::stoi(value);
            } else if (key == "EDGE_WEIGHT_TYPE") {
                weight_type = value;
                if (value != "EUC_2D" && value != "EXPLICIT")
                    throw UnsupportedFormat("tsplib: unsupported EDGE_WEIGHT_TYPE " + value);
            } else if (key == "EDGE_WEIGHT_FORMAT") {
                weight_format = value;
                if (value != "FULL_MATRIX" && value != "UPPER_ROW")
                    throw UnsupportedFormat("tsplib: unsupported EDGE_WEIGHT_FORMAT " + value);
            } else if (key == "TYPE") {
                if (value != "TSP")
                    throw UnsupportedFormat("tsplib: unsupported TYPE " + value);
            } else if (key == "NODE_COORD_SECTION") {
                section = Section::Coords;
            } else if (key == "EDGE_WEIGHT_SECTION") {
                section = Section::Weights;
            } else if (key == "NAME" || key == "COMMENT" || key == "DISPLAY_DATA_TYPE" ||
                       key == "DISPLAY_DATA_SECTION") {
                // informational
            } else {
                throw UnsupportedFormat("tsplib: unsupported field " + key);
            }
            continue;
        }

        std::istringstream row(t);
        if (section == Section::Coords) {
            int index;
            double x, y;
            if (!(row >> index >> x >> y)) throw UnsupportedFormat("tsplib: malformed coordinate line");
            coords.push_back({x, y});
        } else if (section == Section::Weights) {
            double w;
            while (row >> w) weights.push_back(w);
        } else {
            throw UnsupportedFormat("tsplib: data outside any section");
        }
    }

    if (n < 1) throw UnsupportedFormat("tsplib: missing DIMENSION");

    TspMatrix out;
    out.n = n;
    out.distances.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [&](int i, int j) -> double& { return out.distances[static_cast<std::size_t>(i) * n + j]; };

    if (weight_type == "EUC_2D") {
        if (static_cast<int>(coords.size()) != n)
            throw UnsupportedFormat("tsplib: coordinate count does not match DIMENSION");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) at(i, j) = euc_2d(coords[i][0], coords[i][1], coords[j][0], coords[j][1]);
    } else if (weight_type == "EXPLICIT") {
        if (weight_format == "FULL_MATRIX") {
            if (static_cast<int>(weights.size()) != n * n)
                throw UnsupportedFormat("tsplib: FULL_MATRIX entry count mismatch");
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) at(i, j) = weights[static_cast<std::size_t>(i) * n + j];
        } else if (weight_format == "UPPER_ROW") {
            if (static_cast<int>(weights.size()) != n * (n - 1) / 2)
                throw UnsupportedFormat("tsplib: UPPER_ROW entry count mismatch");
            std::size_t idx = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    at(i, j) = weights[idx];
                    at(j, i) = weights[idx];
                    ++idx;
                }
        } else {
            throw UnsupportedFormat("tsplib: EXPLICIT requires EDGE_WEIGHT_FORMAT");
        }
    } else {
        throw UnsupportedFormat("tsplib: missing EDGE_WEIGHT_TYPE");
    }
    return out;
}

}  // namespace qubobench
