#ifndef DIMER_BOARD_HPP
#define DIMER_BOARD_HPP

#include <string>
#include <unordered_map>
#include <vector>

#include "dimer/common.hpp"
#include "dimer/lattice.hpp"

namespace dimer {

enum class Orientation : uint8_t { H, V }; // H: (x,y)+(x+1,y), V: (x,y)+(x,y+1)

struct Domino {
    Cell cell;
    Orientation orientation = Orientation::H;
    Cell partner() const {
        return orientation == Orientation::H ? Cell{cell.x + 1, cell.y} : Cell{cell.x, cell.y + 1};
    }
    friend bool operator==(const Domino&, const Domino&) = default;
    friend auto operator<=>(const Domino&, const Domino&) = default;
};

struct Tiling {
    std::vector<Domino> dominoes;
    void normalize() { std::sort(dominoes.begin(), dominoes.end()); }
    // canonical one-line key for tallying distributions
    std::string key() const;
    // cell -> matched partner, both directions
    std::unordered_map<Cell, Cell, IntPairHash> matching() const;
};

// Plain set of lattice cells with bipartite indexing; the common substrate
// for counting, sampling and height computations.  Regions and polyominoes
// reduce to boards; ad-hoc boards (possibly untileable) are fine too.
class Board {
  public:
    explicit Board(std::vector<Cell> cells);
    static Board from_region(const lattice::TemperleyanRegion& region) {
        return Board(region.cells);
    }
    static Board from_polyomino(const lattice::Polyomino& poly) { return Board(poly.cells()); }

    const std::vector<Cell>& cells() const { return cells_; }
    int cell_count() const { return int(cells_.size()); }
    bool has(Cell c) const { return index_.count(c) > 0; }
    const std::vector<Cell>& blacks() const { return blacks_; }
    const std::vector<Cell>& whites() const { return whites_; }
    int black_index(Cell c) const;
    int white_index(Cell c) const;
    bool balanced() const { return blacks_.size() == whites_.size(); }
    bool simply_connected() const;

  private:
    std::vector<Cell> cells_;
    std::vector<Cell> blacks_;
    std::vector<Cell> whites_;
    std::unordered_map<Cell, int, IntPairHash> index_;
    std::unordered_map<Cell, int, IntPairHash> black_index_;
    std::unordered_map<Cell, int, IntPairHash> white_index_;
};

// exact partition of the board cells by the dominoes
bool tiling_is_valid(const Board& board, const Tiling& tiling);

// One line per domino, "x y H" or "x y V", sorted, terminated by a blank line.
std::string tiling_to_text(const Tiling& tiling);
Tiling tiling_from_text(const std::string& text);

} // namespace dimer

#endif
