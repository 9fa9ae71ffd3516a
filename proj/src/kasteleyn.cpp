#include "dimer/kasteleyn.hpp"

#include <algorithm>
#include <cmath>

namespace dimer {
namespace enumerate {

int kasteleyn_weight(Cell a, Cell b) {
    if (a.y == b.y && std::abs(a.x - b.x) == 1) return 1;
    if (a.x == b.x && std::abs(a.y - b.y) == 1) return (a.x % 2 == 0) ? 1 : -1;
    throw Error(ErrorKind::Contract, "kasteleyn_weight: cells are not adjacent");
}

double KasteleynMatrix::entry(Cell black, Cell white) const {
    auto r = row_of.find(black);
    auto c = col_of.find(white);
    if (r == row_of.end() || c == col_of.end())
        throw Error(ErrorKind::Contract, "cells not in matrix");
    return entries.at(r->second, c->second);
}

static void check_face_condition(const Board& board) {
    // interior faces sit at vertices whose four surrounding cells all exist
    for (const Cell& c : board.cells()) {
        // candidate vertex at the upper-right corner of c
        const Cell sw = c, se{c.x + 1, c.y}, nw{c.x, c.y + 1}, ne{c.x + 1, c.y + 1};
        if (!board.has(se) || !board.has(nw) || !board.has(ne)) continue;
        const int prod = kasteleyn_weight(sw, se) * kasteleyn_weight(se, ne) *
                         kasteleyn_weight(ne, nw) * kasteleyn_weight(nw, sw);
        if (prod != -1)
            throw Error(ErrorKind::Internal, "Kasteleyn face condition violated");
    }
}

KasteleynMatrix kasteleyn_matrix(const Board& board) {
    if (!board.balanced())
        throw Error(ErrorKind::Imbalance, "board has unequal black and white cell counts");
    KasteleynMatrix km;
    km.size = int(board.blacks().size());
    km.entries = DenseMatrix<double>(km.size, km.size);
    km.row_cells = board.blacks();
    km.col_cells = board.whites();
    for (int r = 0; r < km.size; ++r) km.row_of[km.row_cells[r]] = r;
    for (int c = 0; c < km.size; ++c) km.col_of[km.col_cells[c]] = c;
    for (int r = 0; r < km.size; ++r) {
        const Cell b = km.row_cells[r];
        const Cell nbrs[4] = {{b.x + 1, b.y}, {b.x - 1, b.y}, {b.x, b.y + 1}, {b.x, b.y - 1}};
        for (const Cell& w : nbrs) {
            const int c = board.white_index(w);
            if (c >= 0) km.entries.at(r, c) = kasteleyn_weight(b, w);
        }
    }
    check_face_condition(board);
    return km;
}

static BigInt bareiss_determinant_abs(std::vector<std::vector<BigInt>> m) {
    const int n = int(m.size());
    if (n == 0) return BigInt(1);
    BigInt prev(1);
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r) {
            if (!m[r][k].is_zero()) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) return BigInt(0);
        if (pivot != k) std::swap(m[pivot], m[k]); // sign irrelevant, magnitude wanted
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = BigInt::div_exact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
            m[i][k] = BigInt(0);
        }
        prev = m[k][k];
    }
    return m[n - 1][n - 1].abs();
}

BigInt count_tilings(const Board& board) {
    if (board.cell_count() == 0) return BigInt(1); // the empty tiling
    if (board.cell_count() % 2 != 0 || !board.balanced()) return BigInt(0);
    if (!board.simply_connected())
        throw Error(ErrorKind::UnsupportedRegion,
                    "determinant counting requires a simply-connected board");
    const KasteleynMatrix km = kasteleyn_matrix(board);
    std::vector<std::vector<BigInt>> m(km.size, std::vector<BigInt>(km.size, BigInt(0)));
    for (int r = 0; r < km.size; ++r)
        for (int c = 0; c < km.size; ++c) m[r][c] = BigInt(int64_t(km.entries.at(r, c)));
    return bareiss_determinant_abs(std::move(m));
}

namespace {

struct EnumState {
    const Board* board = nullptr;
    std::unordered_map<Cell, char, IntPairHash> covered;
    std::vector<Domino> placed;
    std::vector<Tiling> out;
};

void enumerate_rec(EnumState& st) {
    // lexicographically first uncovered cell
    Cell first{};
    bool found = false;
    for (const Cell& c : st.board->cells()) {
        if (!st.covered.count(c)) {
            first = c;
            found = true;
            break;
        }
    }
    if (!found) {
        Tiling t;
        t.dominoes = st.placed;
        t.normalize();
        st.out.push_back(std::move(t));
        return;
    }
    const Domino options[2] = {{first, Orientation::H}, {first, Orientation::V}};
    for (const Domino& d : options) {
        const Cell p = d.partner();
        if (!st.board->has(p) || st.covered.count(p)) continue;
        st.covered[first] = 1;
        st.covered[p] = 1;
        st.placed.push_back(d);
        enumerate_rec(st);
        st.placed.pop_back();
        st.covered.erase(first);
        st.covered.erase(p);
    }
}

} // namespace

std::vector<Tiling> enumerate_tilings(const Board& board, int max_cells) {
    if (board.cell_count() > max_cells)
        throw Error(ErrorKind::SizeGuard, "enumeration limited to " + std::to_string(max_cells) +
                                              " cells");
    if (board.cell_count() == 0) return {Tiling{}};
    EnumState st;
    st.board = &board;
    enumerate_rec(st);
    return st.out;
}

} // namespace enumerate
} // namespace dimer
