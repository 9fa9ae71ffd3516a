#ifndef DIMER_LATTICE_HPP
#define DIMER_LATTICE_HPP

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "dimer/common.hpp"

namespace dimer {
namespace lattice {

enum class CornerKind { Convex, Concave };

struct Corner {
    Vertex vertex;
    CornerKind kind = CornerKind::Convex;
    Cell square; // the corner square: cell holding the interior angle bisector
};

// Union of lattice squares bounded by one simple closed lattice curve.
// Cells are integer; epsilon scales to continuum coordinates on demand.
class Polyomino {
  public:
    static Polyomino from_cells(std::vector<Cell> cells, double epsilon);

    const std::vector<Cell>& cells() const { return cells_; }
    double epsilon() const { return epsilon_; }
    // counterclockwise closed path; back() is adjacent to front()
    const std::vector<Vertex>& boundary() const { return boundary_; }
    const std::vector<Corner>& corners() const { return corners_; }
    bool contains(Cell c) const { return cell_set_.count(c) > 0; }
    // all corner squares even
    bool is_even() const;
    bool cell_on_boundary(Cell c) const;

  private:
    std::vector<Cell> cells_;
    std::unordered_set<Cell, IntPairHash> cell_set_;
    double epsilon_ = 1.0;
    std::vector<Vertex> boundary_;
    std::vector<Corner> corners_;
};

// m x n rectangle of cells with lower-left cell at the origin; odd m, n keep
// the four corner squares even.
Polyomino build_even_rectangle(int m, int n, double epsilon);

// Even polyomino with one boundary-adjacent square of corner parity removed.
struct TemperleyanRegion {
    Polyomino parent;
    Cell root{};
    std::vector<Cell> cells;      // parent cells minus root, sorted
    std::vector<Vertex> vertex_set;
    std::vector<Vertex> boundary; // ccw boundary of the region (with root notch)
    double epsilon = 1.0;

    bool contains(Cell c) const { return cell_set_.count(c) > 0; }
    bool empty() const { return cells.empty(); }
    // lexicographically smallest region vertex on the removed square
    Vertex reference_vertex() const;

    static TemperleyanRegion unchecked(Polyomino parent, Cell root);

  private:
    static TemperleyanRegion build(Polyomino parent, Cell root, bool strict);
    std::unordered_set<Cell, IntPairHash> cell_set_;
    friend TemperleyanRegion make_temperleyan(const Polyomino&, Cell);
};

TemperleyanRegion make_temperleyan(const Polyomino& parent, Cell root);

struct DomainSpec {
    enum class Kind { HalfPlane, Disk, Rectangle };
    Kind kind = Kind::HalfPlane;
    double rect_a = 1.0;
    double rect_b = 1.0;
    // marked boundary point; ignored for the half-plane (basepoint at infinity)
    complexd basepoint{0.0, 0.0};

    static DomainSpec half_plane() { return {Kind::HalfPlane, 0, 0, {0, 0}}; }
    static DomainSpec unit_disk(complexd basepoint = {-1.0, 0.0});
    static DomainSpec rectangle(double a, double b, complexd basepoint = {0.0, 0.0});
};

// Staircase Temperleyan approximation of a rectangle or the unit disk with
// boundary within 2*epsilon Hausdorff distance of the target boundary and
// root within 2*epsilon of the basepoint.
TemperleyanRegion approximate_domain(const DomainSpec& spec, double epsilon);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
    std::string summary() const;
};

// Structural report: corner parity, root parity and placement, edge-length
// parity rule, balanced coloring, connectivity.  Never throws; failures are
// carried in the report.
ValidationReport validate_temperleyan(const TemperleyanRegion& region);

// Hausdorff distance between the region boundary and the continuum boundary
// of the spec domain (both directions), in continuum units.
double boundary_hausdorff_distance(const TemperleyanRegion& region, const DomainSpec& spec);

// Canonical JSON: {"epsilon":...,"rootCell":[i,j],"cells":[[i,j],...]} with
// cells sorted lexicographically; serialization is byte-stable.
std::string region_to_json(const TemperleyanRegion& region);
TemperleyanRegion region_from_json(const std::string& text);
void save_region(const TemperleyanRegion& region, const std::string& path);
TemperleyanRegion load_region(const std::string& path);

} // namespace lattice
} // namespace dimer

#endif
