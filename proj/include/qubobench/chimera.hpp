#pragma once

#include <vector>

namespace qubobench {

/// Chimera hardware graph C_m: an m x m grid of complete-bipartite 4+4 cells.
/// Qubit (row, col, side, unit) has index 8*(row*m + col) + 4*side + unit,
/// where side 0 holds the vertically-coupled shore and side 1 the
/// horizontally-coupled shore. Edges: all side0/side1 pairs within a cell,
/// plus same-unit couplers between vertically (side 0) and horizontally
/// (side 1) adjacent cells. Maximum qubit degree is 6; the largest complete
/// graph minor is K_{4m+1}.
class ChimeraTopology {
public:
    explicit ChimeraTopology(int m);

    int m() const { return m_; }
    int num_qubits() const { return 8 * m_ * m_; }
    int max_clique_minor() const { return 4 * m_ + 1; }

    struct Coords {
        int row, col, side, unit;
    };

    int qubit(int row, int col, int side, int unit) const;
    Coords coords(int q) const;

    bool has_edge(int a, int b) const;
    std::vector<int> neighbors(int q) const;
    std::vector<std::pair<int, int>> edges() const;

private:
    int m_;
};

}  // namespace qubobench
