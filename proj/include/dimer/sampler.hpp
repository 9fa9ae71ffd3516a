#ifndef DIMER_SAMPLER_HPP
#define DIMER_SAMPLER_HPP

#include <vector>

#include "dimer/board.hpp"
#include "dimer/kasteleyn.hpp"
#include "dimer/lattice.hpp"
#include "dimer/rng.hpp"

namespace dimer {
namespace sampler {

// Grid of even lattice vertices of a Temperleyan rectangle (parent m x n with
// m, n odd, root at a corner).  Vertex (ix, iy) sits at lattice (2ix, 2iy).
struct EvenGrid {
    int nx = 0;
    int ny = 0;
    int root_id = -1;

    int vertex_count() const { return nx * ny; }
    int id(int ix, int iy) const { return ix * ny + iy; }
    int ix_of(int id) const { return id / ny; }
    int iy_of(int id) const { return id % ny; }

    static EvenGrid from_region(const lattice::TemperleyanRegion& region);
    static EvenGrid make(int nx, int ny, int root_id);
};

// Rooted spanning tree as parent pointers (root has parent -1).
struct SpanningTree {
    EvenGrid grid;
    std::vector<int> parent;
    void validate() const; // throws Structure on malformed input
};

// Uniform spanning tree by loop-erased random walks.
SpanningTree wilson_spanning_tree(const EvenGrid& grid, RngStream& rng);

// Exact spanning-tree count of the grid graph by the matrix-tree theorem.
BigInt spanning_tree_count(const EvenGrid& grid);

// Temperley correspondence: parent arrows of the tree place the dominoes on
// even-even cells, the dual-tree arrows place those on odd-odd cells, and the
// two families tile the region exactly.
Tiling temperley_tree_to_tiling(const SpanningTree& tree);
SpanningTree temperley_tiling_to_tree(const EvenGrid& grid, const Tiling& tiling);

// Exact uniform tiling of a Temperleyan rectangle minus a corner.
Tiling sample_tiling_wilson(const lattice::TemperleyanRegion& region, RngStream& rng);
Tiling sample_tiling_wilson(const lattice::TemperleyanRegion& region, uint64_t seed,
                            uint64_t stream = 0);

// Sequential exact sampler driven by inverse-Kasteleyn marginals with
// rank-one updates; reusable across samples for a fixed board.
class KasteleynSampler {
  public:
    explicit KasteleynSampler(const Board& board); // throws NoTiling if none exist
    Tiling sample(RngStream& rng) const;
    int refresh_interval = 256;        // full inverse recomputation cadence
    double pivot_threshold = 1e-8;     // rebuild when the update pivot degrades

  private:
    Board board_;
    enumerate::KasteleynMatrix km_;
    DenseMatrix<double> base_inverse_;
    int n_ = 0;
};

Tiling sample_tiling_kasteleyn(const Board& board, RngStream& rng);
Tiling sample_tiling_kasteleyn(const Board& board, uint64_t seed, uint64_t stream = 0);

} // namespace sampler
} // namespace dimer

#endif
