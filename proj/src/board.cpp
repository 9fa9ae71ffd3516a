#include "dimer/board.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace dimer {

std::string Tiling::key() const {
    Tiling copy = *this;
    copy.normalize();
    std::ostringstream out;
    for (const Domino& d : copy.dominoes)
        out << d.cell.x << ',' << d.cell.y << (d.orientation == Orientation::H ? 'H' : 'V') << ';';
    return out.str();
}

std::unordered_map<Cell, Cell, IntPairHash> Tiling::matching() const {
    std::unordered_map<Cell, Cell, IntPairHash> match;
    match.reserve(dominoes.size() * 2);
    for (const Domino& d : dominoes) {
        match[d.cell] = d.partner();
        match[d.partner()] = d.cell;
    }
    return match;
}

Board::Board(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    cells_ = std::move(cells);
    for (int i = 0; i < int(cells_.size()); ++i) {
        index_[cells_[i]] = i;
        if (cell_is_black(cells_[i])) {
            black_index_[cells_[i]] = int(blacks_.size());
            blacks_.push_back(cells_[i]);
        } else {
            white_index_[cells_[i]] = int(whites_.size());
            whites_.push_back(cells_[i]);
        }
    }
}

int Board::black_index(Cell c) const {
    auto it = black_index_.find(c);
    return it == black_index_.end() ? -1 : it->second;
}

int Board::white_index(Cell c) const {
    auto it = white_index_.find(c);
    return it == white_index_.end() ? -1 : it->second;
}

bool Board::simply_connected() const {
    if (cells_.empty()) return true;
    int minx = cells_[0].x, maxx = cells_[0].x, miny = cells_[0].y, maxy = cells_[0].y;
    for (const Cell& c : cells_) {
        minx = std::min(minx, c.x);
        maxx = std::max(maxx, c.x);
        miny = std::min(miny, c.y);
        maxy = std::max(maxy, c.y);
    }
    // flood the complement from the border of an enlarged bounding box
    const int w = maxx - minx + 3, h = maxy - miny + 3;
    std::vector<char> state(size_t(w) * h, 0); // 0 empty, 1 cell, 2 visited empty
    auto at = [&](int x, int y) -> char& { return state[size_t(x - minx + 1) * h + (y - miny + 1)]; };
    for (const Cell& c : cells_) at(c.x, c.y) = 1;
    std::queue<Cell> queue;
    queue.push({minx - 1, miny - 1});
    at(minx - 1, miny - 1) = 2;
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop();
        const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell& n : nbrs) {
            if (n.x < minx - 1 || n.x > maxx + 1 || n.y < miny - 1 || n.y > maxy + 1) continue;
            if (at(n.x, n.y) == 0) {
                at(n.x, n.y) = 2;
                queue.push(n);
            }
        }
    }
    for (char s : state)
        if (s == 0) return false; // unreached empty pocket = hole
    return true;
}

bool tiling_is_valid(const Board& board, const Tiling& tiling) {
    std::unordered_map<Cell, int, IntPairHash> covered;
    for (const Domino& d : tiling.dominoes) {
        const Cell a = d.cell, b = d.partner();
        if (!board.has(a) || !board.has(b)) return false;
        if (++covered[a] > 1 || ++covered[b] > 1) return false;
    }
    return int(covered.size()) == board.cell_count();
}

std::string tiling_to_text(const Tiling& tiling) {
    Tiling copy = tiling;
    copy.normalize();
    std::ostringstream out;
    for (const Domino& d : copy.dominoes)
        out << d.cell.x << ' ' << d.cell.y << ' ' << (d.orientation == Orientation::H ? 'H' : 'V')
            << '\n';
    out << '\n';
    return out.str();
}

Tiling tiling_from_text(const std::string& text) {
    Tiling tiling;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) break;
        std::istringstream ls(line);
        int x, y;
        char o;
        if (!(ls >> x >> y >> o) || (o != 'H' && o != 'V'))
            throw Error(ErrorKind::Io, "bad tiling line: " + line);
        tiling.dominoes.push_back({{x, y}, o == 'H' ? Orientation::H : Orientation::V});
    }
    tiling.normalize();
    return tiling;
}

} // namespace dimer
