#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dimer/kasteleyn.hpp"
#include "dimer/rng.hpp"

using namespace dimer;

namespace {
Board rect_board(int m, int n) {
    std::vector<Cell> cells;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) cells.push_back({i, j});
    return Board(cells);
}
} // namespace

TEST_CASE("tiny rectangles enumerate to the hand counts") {
    CHECK(enumerate::enumerate_tilings(rect_board(1, 2)).size() == 1);
    CHECK(enumerate::enumerate_tilings(rect_board(2, 2)).size() == 2);
    CHECK(enumerate::enumerate_tilings(rect_board(2, 3)).size() == 3);
    CHECK(enumerate::enumerate_tilings(rect_board(3, 2)).size() == 3);
}

TEST_CASE("enumeration is deterministic, valid and duplicate-free") {
    const Board board = rect_board(4, 3);
    const auto tilings = enumerate::enumerate_tilings(board);
    const auto again = enumerate::enumerate_tilings(board);
    REQUIRE(tilings.size() == again.size());
    std::set<std::string> keys;
    for (size_t i = 0; i < tilings.size(); ++i) {
        CHECK(tiling_is_valid(board, tilings[i]));
        CHECK(tilings[i].key() == again[i].key());
        keys.insert(tilings[i].key());
    }
    CHECK(keys.size() == tilings.size());
}

TEST_CASE("size guard rejects large boards") {
    CHECK_THROWS_AS(enumerate::enumerate_tilings(rect_board(7, 6)), Error);
}

TEST_CASE("untileable boards yield an empty list, not an error") {
    CHECK(enumerate::enumerate_tilings(rect_board(3, 3)).empty());
    CHECK(enumerate::enumerate_tilings(Board({{0, 0}, {1, 0}, {2, 0}, {1, 1}})).empty());
}

TEST_CASE("kasteleyn matrix of the 2x2 square has |det| 2") {
    const Board board = rect_board(2, 2);
    const auto km = enumerate::kasteleyn_matrix(board);
    CHECK(km.size == 2);
    CHECK(enumerate::count_tilings(board) == BigInt(2));
}

TEST_CASE("single domino board gives a 1x1 matrix with unit determinant") {
    const Board board = rect_board(1, 2);
    const auto km = enumerate::kasteleyn_matrix(board);
    CHECK(km.size == 1);
    CHECK(enumerate::count_tilings(board) == BigInt(1));
}

TEST_CASE("unbalanced board raises an imbalance error") {
    try {
        enumerate::kasteleyn_matrix(Board({{0, 0}, {1, 0}, {1, 1}}));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Imbalance);
    }
}

TEST_CASE("counts match enumeration on rectangles") {
    CHECK(enumerate::count_tilings(rect_board(2, 3)) == BigInt(3));
    CHECK(enumerate::count_tilings(rect_board(4, 4)) == BigInt(36));
    CHECK(enumerate::count_tilings(rect_board(3, 4)) == BigInt(11));
    CHECK(enumerate::count_tilings(rect_board(5, 1)) == BigInt(0)); // odd cell count
}

TEST_CASE("8x8 rectangle count matches the classical value") {
    CHECK(enumerate::count_tilings(rect_board(8, 8)).to_string() == "12988816");
}

TEST_CASE("count is invariant under the dihedral symmetries") {
    RngStream rng(7, 7);
    std::vector<Cell> cells = {{0, 0}};
    std::set<Cell> seen = {{0, 0}};
    while (cells.size() < 10) {
        const Cell base = cells[rng.next_below(cells.size())];
        const int dir = int(rng.next_below(4));
        const Cell next{base.x + (dir == 0) - (dir == 1), base.y + (dir == 2) - (dir == 3)};
        if (seen.insert(next).second) cells.push_back(next);
    }
    if (!Board(cells).simply_connected()) return; // extremely unlikely with 10 cells
    const BigInt reference = enumerate::count_tilings(Board(cells));
    for (int transform = 1; transform < 8; ++transform) {
        std::vector<Cell> mapped;
        for (const Cell& c : cells) {
            int x = c.x, y = c.y;
            if (transform & 1) x = -x - 1; // mirror (cells keep unit size)
            if (transform & 2) y = -y - 1;
            if (transform & 4) std::swap(x, y);
            mapped.push_back({x, y});
        }
        CHECK(enumerate::count_tilings(Board(mapped)) == reference);
    }
}

TEST_CASE("tiling text format round trips") {
    const auto tilings = enumerate::enumerate_tilings(rect_board(4, 3));
    for (const Tiling& t : tilings) {
        const std::string text = tiling_to_text(t);
        CHECK(text.back() == '\n');
        CHECK(text[text.size() - 2] == '\n'); // blank-line terminated
        const Tiling back = tiling_from_text(text);
        CHECK(back.key() == t.key());
        CHECK(tiling_to_text(back) == text);
    }
}

TEST_CASE("bigint arithmetic handles large factorials") {
    BigInt f(1);
    for (int i = 2; i <= 40; ++i) f = f * BigInt(i);
    CHECK(f.to_string() == "815915283247897734345611269596115894272000000000");
    CHECK(BigInt::div_exact(f, BigInt(40)) * BigInt(40) == f);
    CHECK(BigInt::from_string(f.to_string()) == f);
    CHECK((BigInt(-5) + BigInt(7)) == BigInt(2));
    CHECK((BigInt(-5) * BigInt(7)) == BigInt(-35));
}
