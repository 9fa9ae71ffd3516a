#ifndef DIMER_HEIGHT_HPP
#define DIMER_HEIGHT_HPP

#include <functional>
#include <vector>

#include "dimer/board.hpp"
#include "dimer/lattice.hpp"
#include "dimer/stats.hpp"

namespace dimer {
namespace height {

// Integer heights on the region's vertex set (parallel to
// region.vertex_set), reference vertex pinned to 0.
struct HeightField {
    std::vector<int> values;
    Vertex reference{};
};

// Local rule: traversing a lattice edge with a black cell (even coordinate
// sum) on the left, h gains +1 when no domino crosses the edge and -3 when
// one does; the white-on-left signs are opposite.  The reference vertex is
// the smallest region vertex on the removed root square.
class HeightEngine {
  public:
    explicit HeightEngine(const lattice::TemperleyanRegion& region);
    // Stand-alone boards (tests, strips): explicit reference vertex.
    HeightEngine(std::vector<Cell> cells, double epsilon, Vertex reference);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    int vertex_index(Vertex v) const;
    Vertex reference() const { return reference_; }
    double epsilon() const { return epsilon_; }

    void compute(const Tiling& tiling, std::vector<int>& out) const;
    HeightField compute(const Tiling& tiling) const;

    bool face_rule_holds(const std::vector<int>& values) const;
    bool boundary_rule_holds(const std::vector<int>& values) const;

    // Nearest region vertex to a continuum point (must lie within 2*epsilon),
    // ties broken lexicographically.
    Vertex nearest_vertex(complexd point) const;

    // epsilon^2 * sum_x phi(x) v(x) over all region vertices
    double smoothed_observable(const std::vector<double>& values,
                               const std::function<double(double, double)>& phi) const;
    double smoothed_observable(const std::vector<int>& values,
                               const std::function<double(double, double)>& phi) const;

  private:
    void build(std::vector<Cell> cells);
    std::vector<Cell> cells_;
    std::vector<Vertex> vertices_;
    std::vector<Vertex> boundary_; // ccw, empty for ad-hoc boards without one
    double epsilon_ = 1.0;
    Vertex reference_{};
    // edge list for the height walk
    struct Edge {
        int from = -1, to = -1;       // vertex indices
        int left_cell = -1, right_cell = -1; // cell indices, -1 outside
    };
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> incident_; // vertex -> edge indices
    std::unordered_map<Cell, int, IntPairHash> cell_index_;
    friend struct MeanPredictor;
    int delta_along(const Edge& e, const std::vector<int>& partner) const;
    std::vector<int> partner_array(const Tiling& tiling) const;
};

HeightField height_function(const lattice::TemperleyanRegion& region, const Tiling& tiling);

// Exact rational centering: mean kept as (sum, count), centered values as
// (count*h - sum)/count, so the vertex-wise mean of the centered fields is
// zero exactly.
struct MeanField {
    std::vector<long long> sums;
    long long count = 0;
    double value(size_t i) const { return double(sums[i]) / double(count); }
};

struct CenteredField {
    std::vector<long long> numerators;
    long long denominator = 1;
    double value(size_t i) const { return double(numerators[i]) / double(denominator); }
};

std::pair<std::vector<CenteredField>, MeanField> center(
    const std::vector<HeightField>& samples);

// Discrete Dirichlet problem with boundary data (2/pi) * accumulated ccw
// turning of the boundary tangent from the reference vertex (+1 per convex
// right angle, -1 per concave), with the additive constant calibrated
// against the tiling-independent boundary heights.
std::vector<double> predict_mean_height(const lattice::TemperleyanRegion& region);

CovarianceEstimate covariance_empirical(const HeightEngine& engine,
                                        const std::vector<HeightField>& samples, complexd p,
                                        complexd q);

// Row-major integer grid (rows y descending), '*' outside the region.
std::string height_csv(const HeightEngine& engine, const std::vector<int>& values);

} // namespace height
} // namespace dimer

#endif
