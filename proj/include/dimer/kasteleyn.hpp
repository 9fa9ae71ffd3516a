#ifndef DIMER_KASTELEYN_HPP
#define DIMER_KASTELEYN_HPP

#include <unordered_map>
#include <utility>
#include <vector>

#include "dimer/bigint.hpp"
#include "dimer/board.hpp"
#include "dimer/linalg.hpp"

namespace dimer {
namespace enumerate {

// Signed bipartite adjacency matrix: rows are black cells, columns white.
// Gauge: horizontal dominoes weigh +1, vertical dominoes in column x weigh
// (-1)^x, which makes the product around every interior face equal -1.
struct KasteleynMatrix {
    int size = 0;                       // blacks == whites
    DenseMatrix<double> entries;        // +1 / -1 / 0
    std::vector<Cell> row_cells;        // black cell per row
    std::vector<Cell> col_cells;        // white cell per column
    // entry provenance: domino (black, white) -> (row, col)
    std::unordered_map<Cell, int, IntPairHash> row_of;
    std::unordered_map<Cell, int, IntPairHash> col_of;

    double entry(Cell black, Cell white) const;
};

// Signed weight of the domino covering two adjacent cells.
int kasteleyn_weight(Cell a, Cell b);

// Throws Imbalance for unbalanced boards.  The face condition is verified on
// construction over all interior faces.
KasteleynMatrix kasteleyn_matrix(const Board& board);

// Exact |det K| via fraction-free (Bareiss) elimination.  Returns 0 for
// unbalanced boards; requires a simply-connected board otherwise.
BigInt count_tilings(const Board& board);

// All tilings by backtracking on the lexicographically first uncovered cell,
// horizontal before vertical; deterministic order, no duplicates.
// Boards over 36 cells are rejected (size guard); untileable boards yield an
// empty list.
std::vector<Tiling> enumerate_tilings(const Board& board, int max_cells = 36);

} // namespace enumerate
} // namespace dimer

#endif
