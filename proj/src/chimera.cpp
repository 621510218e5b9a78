#include "qubobench/chimera.hpp"

#include <stdexcept>

namespace qubobench {

ChimeraTopology::ChimeraTopology(int m) : m_(m) {
    if (m < 1) throw std::invalid_argument("chimera: grid dimension must be positive");
}

int ChimeraTopology::qubit(int row, int col, int side, int unit) const {
    return 8 * (row * m_ + col) + 4 * side + unit;
}

ChimeraTopology::Coords ChimeraTopology::coords(int q) const {
    if (q < 0 || q >= num_qubits()) throw std::invalid_argument("chimera: qubit index out of range");
    const int cell = q / 8;
    const int within = q % 8;
    return {cell / m_, cell % m_, within / 4, within % 4};
}

bool ChimeraTopology::has_edge(int a, int b) const {
    if (a == b) return false;
    const Coords ca = coords(a), cb = coords(b);
    if (ca.row == cb.row && ca.col == cb.col) return ca.side != cb.side;
    if (ca.unit != cb.unit || ca.side != cb.side) return false;
    if (ca.side == 0)  // vertical shore couples to the cells above/below
        return ca.col == cb.col && (ca.row == cb.row + 1 || cb.row == ca.row + 1);
    return ca.row == cb.row && (ca.col == cb.col + 1 || cb.col == ca.col + 1);
}

std::vector<int> ChimeraTopology::neighbors(int q) const {
    const Coords c = coords(q);
    std::vector<int> out;
    out.reserve(6);
    if (c.side == 0) {
        if (c.row > 0) out.push_back(qubit(c.row - 1, c.col, 0, c.unit));
        for (int u = 0; u < 4; ++u) out.push_back(qubit(c.row, c.col, 1, u));
        if (c.row + 1 < m_) out.push_back(qubit(c.row + 1, c.col, 0, c.unit));
    } else {
        if (c.col > 0) out.push_back(qubit(c.row, c.col - 1, 1, c.unit));
        for (int u = 0; u < 4; ++u) out.push_back(qubit(c.row, c.col, 0, u));
        if (c.col + 1 < m_) out.push_back(qubit(c.row, c.col + 1, 1, c.unit));
    }
    return out;
}

std::vector<std::pair<int, int>> ChimeraTopology::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int row = 0; row < m_; ++row) {
        for (int col = 0; col < m_; ++col) {
            for (int u = 0; u < 4; ++u)
                for (int v = 0; v < 4; ++v)
                    out.emplace_back(qubit(row, col, 0, u), qubit(row, col, 1, v));
            if (row + 1 < m_)
                for (int u = 0; u < 4; ++u)
                    out.emplace_back(qubit(row, col, 0, u), qubit(row + 1, col, 0, u));
            if (col + 1 < m_)
                for (int u = 0; u < 4; ++u)
                    out.emplace_back(qubit(row, col, 1, u), qubit(row, col + 1, 1, u));
        }
    }
    return out;
}

}  // namespace qubobench
