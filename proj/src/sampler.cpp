#include "dimer/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace dimer {
namespace sampler {

EvenGrid EvenGrid::make(int nx, int ny, int root_id) {
    if (nx < 1 || ny < 1 || root_id < 0 || root_id >= nx * ny)
        throw Error(ErrorKind::Contract, "bad even-grid dimensions");
    EvenGrid g;
    g.nx = nx;
    g.ny = ny;
    g.root_id = root_id;
    return g;
}

EvenGrid EvenGrid::from_region(const lattice::TemperleyanRegion& region) {
    const auto& cells = region.parent.cells();
    int maxx = 0, maxy = 0;
    for (const Cell& c : cells) {
        if (c.x < 0 || c.y < 0)
            throw Error(ErrorKind::UnsupportedRegion, "rectangle must sit at the origin");
        maxx = std::max(maxx, c.x);
        maxy = std::max(maxy, c.y);
    }
    const int m = maxx + 1, n = maxy + 1;
    if (int64_t(m) * n != int64_t(cells.size()) || m % 2 == 0 || n % 2 == 0)
        throw Error(ErrorKind::UnsupportedRegion,
                    "tree sampling needs an odd-by-odd rectangular parent");
    const Cell r = region.root;
    const bool corner = (r.x == 0 || r.x == m - 1) && (r.y == 0 || r.y == n - 1);
    if (!corner)
        throw Error(ErrorKind::UnsupportedRegion, "tree sampling needs a corner root");
    EvenGrid g;
    g.nx = (m + 1) / 2;
    g.ny = (n + 1) / 2;
    g.root_id = g.id(r.x / 2, r.y / 2);
    return g;
}

void SpanningTree::validate() const {
    const int nv = grid.vertex_count();
    if (int(parent.size()) != nv) throw Error(ErrorKind::Structure, "tree size mismatch");
    if (parent[grid.root_id] != -1) throw Error(ErrorKind::Structure, "root must have no parent");
    for (int v = 0; v < nv; ++v) {
        if (v == grid.root_id) continue;
        const int p = parent[v];
        if (p < 0 || p >= nv) throw Error(ErrorKind::Structure, "parent out of range");
        const int dx = std::abs(grid.ix_of(p) - grid.ix_of(v));
        const int dy = std::abs(grid.iy_of(p) - grid.iy_of(v));
        if (dx + dy != 1) throw Error(ErrorKind::Structure, "parent is not a grid neighbor");
    }
    // every vertex must reach the root without revisiting
    for (int v = 0; v < nv; ++v) {
        int u = v, steps = 0;
        while (u != grid.root_id) {
            u = parent[u];
            if (++steps > nv) throw Error(ErrorKind::Structure, "parent pointers contain a cycle");
        }
    }
}

SpanningTree wilson_spanning_tree(const EvenGrid& grid, RngStream& rng) {
    const int nv = grid.vertex_count();
    SpanningTree tree;
    tree.grid = grid;
    tree.parent.assign(nv, -1);
    std::vector<char> in_tree(nv, 0);
    std::vector<int> next(nv, -1);
    in_tree[grid.root_id] = 1;
    std::vector<int> nbrs;
    nbrs.reserve(4);
    auto neighbors = [&](int v) {
        nbrs.clear();
        const int ix = grid.ix_of(v), iy = grid.iy_of(v);
        if (ix + 1 < grid.nx) nbrs.push_back(grid.id(ix + 1, iy));
        if (iy + 1 < grid.ny) nbrs.push_back(grid.id(ix, iy + 1));
        if (ix > 0) nbrs.push_back(grid.id(ix - 1, iy));
        if (iy > 0) nbrs.push_back(grid.id(ix, iy - 1));
    };
    for (int start = 0; start < nv; ++start) {
        if (in_tree[start]) continue;
        int u = start;
        while (!in_tree[u]) { // random walk; next-pointers implement loop erasure
            neighbors(u);
            next[u] = nbrs[rng.next_below(nbrs.size())];
            u = next[u];
        }
        u = start;
        while (!in_tree[u]) {
            in_tree[u] = 1;
            tree.parent[u] = next[u];
            u = next[u];
        }
    }
    return tree;
}

BigInt spanning_tree_count(const EvenGrid& grid) {
    const int nv = grid.vertex_count();
    if (nv == 1) return BigInt(1);
    // Laplacian minor with the root row/column struck out
    std::vector<std::vector<BigInt>> lap(nv - 1, std::vector<BigInt>(nv - 1, BigInt(0)));
    auto reduced = [&](int v) { return v < grid.root_id ? v : v - 1; };
    for (int v = 0; v < nv; ++v) {
        if (v == grid.root_id) continue;
        const int ix = grid.ix_of(v), iy = grid.iy_of(v);
        const int candidates[4] = {ix + 1 < grid.nx ? grid.id(ix + 1, iy) : -1,
                                   iy + 1 < grid.ny ? grid.id(ix, iy + 1) : -1,
                                   ix > 0 ? grid.id(ix - 1, iy) : -1,
                                   iy > 0 ? grid.id(ix, iy - 1) : -1};
        int deg = 0;
        for (int w : candidates) {
            if (w < 0) continue;
            ++deg;
            if (w != grid.root_id)
                lap[reduced(v)][reduced(w)] = lap[reduced(v)][reduced(w)] - BigInt(1);
        }
        lap[reduced(v)][reduced(v)] = BigInt(deg);
    }
    // fraction-free elimination (all divisions exact)
    const int n = nv - 1;
    BigInt prev(1);
    for (int k = 0; k < n; ++k) {
        int pivot = -1;
        for (int r = k; r < n; ++r)
            if (!lap[r][k].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return BigInt(0);
        if (pivot != k) std::swap(lap[pivot], lap[k]);
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                lap[i][j] = BigInt::div_exact(lap[k][k] * lap[i][j] - lap[i][k] * lap[k][j], prev);
            lap[i][k] = BigInt(0);
        }
        prev = lap[k][k];
    }
    return lap[n - 1][n - 1].abs();
}

namespace {

enum Dir { East = 0, North = 1, West = 2, South = 3 };

Domino even_cell_domino(int lx, int ly, int dir) {
    switch (dir) {
        case East: return {{lx, ly}, Orientation::H};
        case West: return {{lx - 1, ly}, Orientation::H};
        case North: return {{lx, ly}, Orientation::V};
        default: return {{lx, ly - 1}, Orientation::V};
    }
}

struct EdgeKey {
    int a, b; // normalized vertex ids
    bool operator==(const EdgeKey&) const = default;
};
struct EdgeKeyHash {
    size_t operator()(const EdgeKey& e) const {
        return std::hash<int64_t>()((int64_t(e.a) << 32) ^ uint32_t(e.b));
    }
};

} // namespace

Tiling temperley_tree_to_tiling(const SpanningTree& tree) {
    tree.validate();
    const EvenGrid& g = tree.grid;
    Tiling tiling;
    std::unordered_set<EdgeKey, EdgeKeyHash> tree_edges;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int p = tree.parent[v];
        if (p < 0) continue;
        tree_edges.insert({std::min(v, p), std::max(v, p)});
        const int ix = g.ix_of(v), iy = g.iy_of(v);
        const int px = g.ix_of(p), py = g.iy_of(p);
        int dir = East;
        if (px == ix + 1) dir = East;
        else if (px == ix - 1) dir = West;
        else if (py == iy + 1) dir = North;
        else dir = South;
        tiling.dominoes.push_back(even_cell_domino(2 * ix, 2 * iy, dir));
    }

    // Dual tree on the grid faces: precisely the duals of non-tree edges.
    // Each face's parent arrow (towards the outer face) places the domino on
    // the odd-odd cell at the face center.
    const int fx_count = g.nx - 1, fy_count = g.ny - 1;
    if (fx_count > 0 && fy_count > 0) {
        auto fid = [&](int fx, int fy) { return fx * fy_count + fy; };
        std::vector<int> face_dir(fx_count * fy_count, -1);
        std::queue<int> queue;
        auto primal_in_tree = [&](int v1, int v2) {
            return tree_edges.count({std::min(v1, v2), std::max(v1, v2)}) > 0;
        };
        // seed with faces joined to the outer face across a non-tree edge
        for (int fx = 0; fx < fx_count; ++fx) {
            for (int fy = 0; fy < fy_count; ++fy) {
                int dir = -1;
                if (fy == 0 && !primal_in_tree(g.id(fx, 0), g.id(fx + 1, 0))) dir = South;
                else if (fx == fx_count - 1 &&
                         !primal_in_tree(g.id(g.nx - 1, fy), g.id(g.nx - 1, fy + 1)))
                    dir = East;
                else if (fy == fy_count - 1 &&
                         !primal_in_tree(g.id(fx, g.ny - 1), g.id(fx + 1, g.ny - 1)))
                    dir = North;
                else if (fx == 0 && !primal_in_tree(g.id(0, fy), g.id(0, fy + 1))) dir = West;
                if (dir >= 0 && face_dir[fid(fx, fy)] < 0) {
                    face_dir[fid(fx, fy)] = dir;
                    queue.push(fid(fx, fy));
                }
            }
        }
        while (!queue.empty()) {
            const int f = queue.front();
            queue.pop();
            const int fx = f / fy_count, fy = f % fy_count;
            struct Step {
                int nfx, nfy, v1, v2, dir_to_parent;
            };
            const Step steps[4] = {
                {fx + 1, fy, g.id(fx + 1, fy), g.id(fx + 1, fy + 1), West},
                {fx - 1, fy, g.id(fx, fy), g.id(fx, fy + 1), East},
                {fx, fy + 1, g.id(fx, fy + 1), g.id(fx + 1, fy + 1), South},
                {fx, fy - 1, g.id(fx, fy), g.id(fx + 1, fy), North},
            };
            for (const Step& s : steps) {
                if (s.nfx < 0 || s.nfx >= fx_count || s.nfy < 0 || s.nfy >= fy_count) continue;
                if (face_dir[fid(s.nfx, s.nfy)] >= 0) continue;
                if (primal_in_tree(s.v1, s.v2)) continue;
                face_dir[fid(s.nfx, s.nfy)] = s.dir_to_parent;
                queue.push(fid(s.nfx, s.nfy));
            }
        }
        for (int fx = 0; fx < fx_count; ++fx) {
            for (int fy = 0; fy < fy_count; ++fy) {
                const int dir = face_dir[fid(fx, fy)];
                if (dir < 0)
                    throw Error(ErrorKind::Internal, "dual tree failed to span the faces");
                const int cx = 2 * fx + 1, cy = 2 * fy + 1;
                switch (dir) {
                    case East: tiling.dominoes.push_back({{cx, cy}, Orientation::H}); break;
                    case West: tiling.dominoes.push_back({{cx - 1, cy}, Orientation::H}); break;
                    case North: tiling.dominoes.push_back({{cx, cy}, Orientation::V}); break;
                    default: tiling.dominoes.push_back({{cx, cy - 1}, Orientation::V}); break;
                }
            }
        }
    }
    tiling.normalize();
    return tiling;
}

SpanningTree temperley_tiling_to_tree(const EvenGrid& grid, const Tiling& tiling) {
    SpanningTree tree;
    tree.grid = grid;
    tree.parent.assign(grid.vertex_count(), -1);
    const auto match = tiling.matching();
    for (int v = 0; v < grid.vertex_count(); ++v) {
        if (v == grid.root_id) continue;
        const int ix = grid.ix_of(v), iy = grid.iy_of(v);
        const Cell cell{2 * ix, 2 * iy};
        auto it = match.find(cell);
        if (it == match.end())
            throw Error(ErrorKind::Structure, "tiling leaves an even-even cell uncovered");
        const Cell w = it->second;
        int px = ix, py = iy;
        if (w.x == cell.x + 1) px = ix + 1;
        else if (w.x == cell.x - 1) px = ix - 1;
        else if (w.y == cell.y + 1) py = iy + 1;
        else py = iy - 1;
        if (px < 0 || px >= grid.nx || py < 0 || py >= grid.ny)
            throw Error(ErrorKind::Structure, "even-cell domino points outside the grid");
        tree.parent[v] = grid.id(px, py);
    }
    tree.validate();
    return tree;
}

Tiling sample_tiling_wilson(const lattice::TemperleyanRegion& region, RngStream& rng) {
    const EvenGrid grid = EvenGrid::from_region(region);
    const SpanningTree tree = wilson_spanning_tree(grid, rng);
    return temperley_tree_to_tiling(tree);
}

Tiling sample_tiling_wilson(const lattice::TemperleyanRegion& region, uint64_t seed,
                            uint64_t stream) {
    RngStream rng(seed, stream);
    return sample_tiling_wilson(region, rng);
}

KasteleynSampler::KasteleynSampler(const Board& board)
    : board_(board) {
    try {
        km_ = enumerate::kasteleyn_matrix(board_);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Imbalance)
            throw Error(ErrorKind::NoTiling, "unbalanced board admits no tiling");
        throw;
    }
    n_ = km_.size;
    if (n_ == 0) return;
    auto lu = lu_factor(km_.entries);
    if (lu.singular) throw Error(ErrorKind::NoTiling, "board admits no tiling (singular matrix)");
    base_inverse_ = lu_inverse(lu);
}

namespace {

// inverse of the Kasteleyn submatrix restricted to the active rows/columns
DenseMatrix<double> rebuild_inverse(const enumerate::KasteleynMatrix& km,
                                    const std::vector<char>& black_active,
                                    const std::vector<char>& white_active) {
    std::vector<int> rows, cols;
    for (int r = 0; r < km.size; ++r)
        if (black_active[r]) rows.push_back(r);
    for (int c = 0; c < km.size; ++c)
        if (white_active[c]) cols.push_back(c);
    DenseMatrix<double> sub(int(rows.size()), int(cols.size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub.at(int(i), int(j)) = km.entries.at(rows[i], cols[j]);
    auto lu = lu_factor(sub);
    if (lu.singular)
        throw Error(ErrorKind::Numeric, "conditioning failure: remaining board became singular");
    DenseMatrix<double> small = lu_inverse(lu);
    DenseMatrix<double> full(km.size, km.size);
    for (size_t j = 0; j < cols.size(); ++j)
        for (size_t i = 0; i < rows.size(); ++i) full.at(cols[j], rows[i]) = small.at(int(j), int(i));
    return full;
}

} // namespace

Tiling KasteleynSampler::sample(RngStream& rng) const {
    Tiling tiling;
    if (n_ == 0) return tiling;
    DenseMatrix<double> inv = base_inverse_; // inv.at(white, black)
    std::vector<char> black_active(n_, 1), white_active(n_, 1);
    int placed_since_refresh = 0;
    for (int step = 0; step < n_; ++step) {
        int row = -1;
        for (int r = 0; r < n_; ++r)
            if (black_active[r]) {
                row = r;
                break;
            }
        const Cell b = km_.row_cells[row];
        // marginal of each candidate domino given the placements so far
        const Cell nbrs[4] = {{b.x + 1, b.y}, {b.x - 1, b.y}, {b.x, b.y + 1}, {b.x, b.y - 1}};
        int cand_cols[4];
        double cand_p[4];
        int n_cand = 0;
        double total = 0.0;
        for (const Cell& w : nbrs) {
            auto it = km_.col_of.find(w);
            if (it == km_.col_of.end() || !white_active[it->second]) continue;
            const double p = km_.entries.at(row, it->second) * inv.at(it->second, row);
            cand_cols[n_cand] = it->second;
            cand_p[n_cand] = std::max(p, 0.0);
            total += cand_p[n_cand];
            ++n_cand;
        }
        if (n_cand == 0 || total < 1e-9) {
            // numerical drift; recompute the inverse from scratch and retry
            inv = rebuild_inverse(km_, black_active, white_active);
            placed_since_refresh = 0;
            total = 0.0;
            n_cand = 0;
            for (const Cell& w : nbrs) {
                auto it = km_.col_of.find(w);
                if (it == km_.col_of.end() || !white_active[it->second]) continue;
                const double p = km_.entries.at(row, it->second) * inv.at(it->second, row);
                cand_cols[n_cand] = it->second;
                cand_p[n_cand] = std::max(p, 0.0);
                total += cand_p[n_cand];
                ++n_cand;
            }
            if (n_cand == 0 || total < 1e-9)
                throw Error(ErrorKind::Numeric, "sampler lost all candidate placements");
        }
        double u = rng.next_double() * total;
        int chosen = n_cand - 1;
        for (int i = 0; i < n_cand; ++i) {
            if (u < cand_p[i]) {
                chosen = i;
                break;
            }
            u -= cand_p[i];
        }
        const int col = cand_cols[chosen];
        const Cell w = km_.col_cells[col];
        const Cell lead = std::min(b, w);
        tiling.dominoes.push_back(
            {lead, b.y == w.y ? Orientation::H : Orientation::V});
        black_active[row] = 0;
        white_active[col] = 0;
        ++placed_since_refresh;
        if (step + 1 == n_) break;
        const double pivot = inv.at(col, row);
        if (placed_since_refresh >= refresh_interval || std::fabs(pivot) < pivot_threshold) {
            inv = rebuild_inverse(km_, black_active, white_active);
            placed_since_refresh = 0;
        } else {
            // rank-one update of the remaining inverse
            const double inv_pivot = 1.0 / pivot;
            for (int c = 0; c < n_; ++c) {
                if (!white_active[c]) continue;
                const double scale = inv.at(c, row) * inv_pivot;
                if (scale == 0.0) continue;
                for (int r = 0; r < n_; ++r) {
                    if (!black_active[r]) continue;
                    inv.at(c, r) -= scale * inv.at(col, r);
                }
            }
        }
    }
    tiling.normalize();
    return tiling;
}

Tiling sample_tiling_kasteleyn(const Board& board, RngStream& rng) {
    const KasteleynSampler sampler(board);
    return sampler.sample(rng);
}

Tiling sample_tiling_kasteleyn(const Board& board, uint64_t seed, uint64_t stream) {
    RngStream rng(seed, stream);
    return sample_tiling_kasteleyn(board, rng);
}

} // namespace sampler
} // namespace dimer
