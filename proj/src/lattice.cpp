#include "dimer/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace dimer {
namespace lattice {

namespace {

struct DirectedEdge {
    Vertex from;
    Vertex to;
};

// Directed boundary edges with the interior on the left (counterclockwise).
std::vector<DirectedEdge> boundary_edges(const std::unordered_set<Cell, IntPairHash>& cells) {
    std::vector<DirectedEdge> edges;
    for (const Cell& c : cells) {
        if (!cells.count({c.x, c.y - 1})) edges.push_back({{c.x, c.y}, {c.x + 1, c.y}});
        if (!cells.count({c.x + 1, c.y})) edges.push_back({{c.x + 1, c.y}, {c.x + 1, c.y + 1}});
        if (!cells.count({c.x, c.y + 1})) edges.push_back({{c.x + 1, c.y + 1}, {c.x, c.y + 1}});
        if (!cells.count({c.x - 1, c.y})) edges.push_back({{c.x, c.y + 1}, {c.x, c.y}});
    }
    return edges;
}

void check_connected(const std::vector<Cell>& cells,
                     const std::unordered_set<Cell, IntPairHash>& cell_set) {
    if (cells.empty()) return;
    std::unordered_set<Cell, IntPairHash> seen;
    std::queue<Cell> queue;
    queue.push(cells.front());
    seen.insert(cells.front());
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop();
        const Cell nbrs[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
        for (const Cell& n : nbrs) {
            if (cell_set.count(n) && !seen.count(n)) {
                seen.insert(n);
                queue.push(n);
            }
        }
    }
    if (seen.size() != cells.size())
        throw Error(ErrorKind::Validation, "polyomino cells are not connected");
}

// Trace the single ccw boundary loop; rejects pinch points and inner loops
// (holes).  Returns the closed vertex path starting at the smallest vertex.
std::vector<Vertex> trace_boundary(const std::unordered_set<Cell, IntPairHash>& cell_set) {
    std::vector<DirectedEdge> edges = boundary_edges(cell_set);
    if (edges.empty()) return {};
    std::map<Vertex, Vertex> next;
    for (const DirectedEdge& e : edges) {
        auto [it, inserted] = next.emplace(e.from, e.to);
        if (!inserted)
            throw Error(ErrorKind::Validation,
                        "boundary is not a simple closed curve (pinch point)");
    }
    const Vertex start = next.begin()->first; // smallest vertex
    std::vector<Vertex> path;
    Vertex v = start;
    do {
        path.push_back(v);
        auto it = next.find(v);
        if (it == next.end()) throw Error(ErrorKind::Validation, "boundary walk broke");
        v = it->second;
    } while (!(v == start) && path.size() <= edges.size());
    if (path.size() != edges.size())
        throw Error(ErrorKind::Validation, "boundary has several loops (hole or split)");
    return path;
}

int turn_cross(Vertex a, Vertex b, Vertex c) {
    const int d1x = b.x - a.x, d1y = b.y - a.y;
    const int d2x = c.x - b.x, d2y = c.y - b.y;
    return d1x * d2y - d1y * d2x;
}

std::vector<Corner> find_corners(const std::vector<Vertex>& path,
                                 const std::unordered_set<Cell, IntPairHash>& cell_set) {
    std::vector<Corner> corners;
    const size_t n = path.size();
    int total_turn = 0;
    for (size_t i = 0; i < n; ++i) {
        const Vertex prev = path[(i + n - 1) % n];
        const Vertex cur = path[i];
        const Vertex nxt = path[(i + 1) % n];
        const int cross = turn_cross(prev, cur, nxt);
        if (cross == 0) continue;
        total_turn += cross > 0 ? 1 : -1;
        Corner corner;
        corner.vertex = cur;
        corner.kind = cross > 0 ? CornerKind::Convex : CornerKind::Concave;
        const Cell around[4] = {{cur.x - 1, cur.y - 1},
                                {cur.x, cur.y - 1},
                                {cur.x - 1, cur.y},
                                {cur.x, cur.y}};
        int inside = 0;
        Cell inside_cell{}, outside_cell{};
        for (const Cell& c : around) {
            if (cell_set.count(c)) {
                ++inside;
                inside_cell = c;
            } else {
                outside_cell = c;
            }
        }
        if (corner.kind == CornerKind::Convex) {
            if (inside != 1)
                throw Error(ErrorKind::Validation, "inconsistent convex corner");
            corner.square = inside_cell;
        } else {
            if (inside != 3)
                throw Error(ErrorKind::Validation, "inconsistent concave corner");
            // diagonally opposite the unique outside cell
            corner.square = {cur.x - 1 - (outside_cell.x - cur.x), cur.y - 1 - (outside_cell.y - cur.y)};
        }
        corners.push_back(corner);
    }
    if (!path.empty() && total_turn != 4)
        throw Error(ErrorKind::Validation, "boundary total turning is not +4 right angles");
    return corners;
}

std::vector<Vertex> collect_vertices(const std::vector<Cell>& cells) {
    std::vector<Vertex> vs;
    vs.reserve(cells.size() * 4);
    for (const Cell& c : cells) {
        vs.push_back({c.x, c.y});
        vs.push_back({c.x + 1, c.y});
        vs.push_back({c.x, c.y + 1});
        vs.push_back({c.x + 1, c.y + 1});
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

} // namespace

Polyomino Polyomino::from_cells(std::vector<Cell> cells, double epsilon) {
    if (epsilon <= 0.0) throw Error(ErrorKind::Contract, "epsilon must be positive");
    if (cells.empty()) throw Error(ErrorKind::Validation, "polyomino needs at least one cell");
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    Polyomino p;
    p.cells_ = std::move(cells);
    p.cell_set_.insert(p.cells_.begin(), p.cells_.end());
    p.epsilon_ = epsilon;
    check_connected(p.cells_, p.cell_set_);
    p.boundary_ = trace_boundary(p.cell_set_);
    p.corners_ = find_corners(p.boundary_, p.cell_set_);
    return p;
}

bool Polyomino::is_even() const {
    for (const Corner& c : corners_)
        if (!cell_is_even(c.square)) return false;
    return true;
}

bool Polyomino::cell_on_boundary(Cell c) const {
    if (!contains(c)) return false;
    return !contains({c.x + 1, c.y}) || !contains({c.x - 1, c.y}) || !contains({c.x, c.y + 1}) ||
           !contains({c.x, c.y - 1});
}

Polyomino build_even_rectangle(int m, int n, double epsilon) {
    if (m <= 0 || n <= 0) throw Error(ErrorKind::Contract, "rectangle sides must be positive");
    if (m % 2 == 0 || n % 2 == 0)
        throw Error(ErrorKind::Parity, "even rectangle needs odd cell counts (corner squares must be even)");
    std::vector<Cell> cells;
    cells.reserve(size_t(m) * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) cells.push_back({i, j});
    return Polyomino::from_cells(std::move(cells), epsilon);
}

TemperleyanRegion TemperleyanRegion::build(Polyomino parent, Cell root, bool strict) {
    TemperleyanRegion region;
    region.epsilon = parent.epsilon();
    region.root = root;
    for (const Cell& c : parent.cells())
        if (!(c == root)) region.cells.push_back(c);
    std::sort(region.cells.begin(), region.cells.end());
    region.cell_set_.insert(region.cells.begin(), region.cells.end());
    region.vertex_set = collect_vertices(region.cells);
    if (!region.cells.empty()) {
        try {
            std::unordered_set<Cell, IntPairHash> cs(region.cells.begin(), region.cells.end());
            region.boundary = trace_boundary(cs);
        } catch (const Error& e) {
            if (strict)
                throw Error(ErrorKind::Placement,
                            std::string("root removal breaks the region: ") + e.what());
            region.boundary.clear();
        }
    }
    region.parent = std::move(parent);
    return region;
}

TemperleyanRegion make_temperleyan(const Polyomino& parent, Cell root) {
    if (!parent.is_even())
        throw Error(ErrorKind::Validation, "parent polyomino is not even (corner squares)");
    if (!parent.contains(root)) throw Error(ErrorKind::Placement, "root is not a parent cell");
    if (!cell_is_even(root))
        throw Error(ErrorKind::Parity, "root parity differs from the corner squares");
    if (!parent.cell_on_boundary(root))
        throw Error(ErrorKind::Placement, "root is not adjacent to the boundary");
    TemperleyanRegion region = TemperleyanRegion::build(parent, root, true);
    int black = 0, white = 0;
    for (const Cell& c : region.cells) (cell_is_black(c) ? black : white)++;
    if (black != white)
        throw Error(ErrorKind::Parity, "region coloring is unbalanced after root removal");
    return region;
}

TemperleyanRegion TemperleyanRegion::unchecked(Polyomino parent, Cell root) {
    if (!parent.contains(root)) throw Error(ErrorKind::Placement, "root is not a parent cell");
    return build(std::move(parent), root, false);
}

Vertex TemperleyanRegion::reference_vertex() const {
    const Vertex candidates[4] = {{root.x, root.y},
                                  {root.x, root.y + 1},
                                  {root.x + 1, root.y},
                                  {root.x + 1, root.y + 1}};
    std::optional<Vertex> best;
    for (const Vertex& v : candidates) {
        if (std::binary_search(vertex_set.begin(), vertex_set.end(), v))
            if (!best || v < *best) best = v;
    }
    if (!best) throw Error(ErrorKind::Contract, "empty region has no reference vertex");
    return *best;
}

DomainSpec DomainSpec::unit_disk(complexd basepoint) {
    if (std::abs(std::abs(basepoint) - 1.0) > 1e-9)
        throw Error(ErrorKind::Contract, "disk basepoint must lie on the unit circle");
    DomainSpec s;
    s.kind = Kind::Disk;
    s.basepoint = basepoint;
    return s;
}

DomainSpec DomainSpec::rectangle(double a, double b, complexd basepoint) {
    if (a <= 0 || b <= 0) throw Error(ErrorKind::Contract, "rectangle sides must be positive");
    const double x = basepoint.real(), y = basepoint.imag();
    const bool on_edge = ((std::abs(y) < 1e-9 || std::abs(y - b) < 1e-9) && x >= -1e-9 && x <= a + 1e-9) ||
                         ((std::abs(x) < 1e-9 || std::abs(x - a) < 1e-9) && y >= -1e-9 && y <= b + 1e-9);
    if (!on_edge) throw Error(ErrorKind::Contract, "rectangle basepoint must lie on the boundary");
    DomainSpec s;
    s.kind = Kind::Rectangle;
    s.rect_a = a;
    s.rect_b = b;
    s.basepoint = basepoint;
    return s;
}

namespace {

int nearest_odd(double t) {
    int k = int(std::lround(t));
    int best = 1;
    double best_d = 1e300;
    for (int cand = k - 2; cand <= k + 2; ++cand) {
        if (cand < 1 || cand % 2 == 0) continue;
        const double d = std::fabs(double(cand) - t);
        if (d < best_d - 1e-12) {
            best = cand;
            best_d = d;
        }
    }
    return best;
}

Cell pick_root(const Polyomino& parent, complexd basepoint, double eps) {
    std::optional<Cell> best;
    double best_d = 1e300;
    for (const Cell& c : parent.cells()) {
        if (!cell_is_even(c) || !parent.cell_on_boundary(c)) continue;
        const complexd center(eps * (c.x + 0.5), eps * (c.y + 0.5));
        const double d = std::abs(center - basepoint);
        if (d < best_d - 1e-12) {
            best = c;
            best_d = d;
        }
    }
    if (!best || best_d > 2.0 * eps)
        throw Error(ErrorKind::Resolution, "no boundary-adjacent even cell within 2*epsilon of the basepoint");
    return *best;
}

double dist_point_segment(complexd p, complexd a, complexd b) {
    const complexd ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

double dist_to_rect_border(complexd p, double a, double b) {
    const complexd corners[4] = {{0, 0}, {a, 0}, {a, b}, {0, b}};
    double d = 1e300;
    for (int i = 0; i < 4; ++i) d = std::min(d, dist_point_segment(p, corners[i], corners[(i + 1) % 4]));
    return d;
}

} // namespace

double boundary_hausdorff_distance(const TemperleyanRegion& region, const DomainSpec& spec) {
    if (region.boundary.empty()) throw Error(ErrorKind::Contract, "empty region");
    if (spec.kind == DomainSpec::Kind::HalfPlane)
        throw Error(ErrorKind::Contract, "half-plane has no bounded staircase approximation");
    const double eps = region.epsilon;
    const size_t n = region.boundary.size();
    std::vector<complexd> poly(n);
    for (size_t i = 0; i < n; ++i)
        poly[i] = complexd(eps * region.boundary[i].x, eps * region.boundary[i].y);

    auto dist_target = [&](complexd p) {
        if (spec.kind == DomainSpec::Kind::Disk) return std::fabs(std::abs(p) - 1.0);
        return dist_to_rect_border(p, spec.rect_a, spec.rect_b);
    };

    double d_poly_to_target = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const complexd a = poly[i], b = poly[(i + 1) % n];
        d_poly_to_target = std::max(d_poly_to_target, dist_target(a));
        d_poly_to_target = std::max(d_poly_to_target, dist_target(0.5 * (a + b)));
    }

    auto dist_poly = [&](complexd p) {
        double d = 1e300;
        for (size_t i = 0; i < n; ++i) d = std::min(d, dist_point_segment(p, poly[i], poly[(i + 1) % n]));
        return d;
    };

    double d_target_to_poly = 0.0;
    const int samples = std::max<int>(1024, int(8 * n));
    if (spec.kind == DomainSpec::Kind::Disk) {
        for (int i = 0; i < samples; ++i) {
            const double t = 6.283185307179586 * i / samples;
            d_target_to_poly = std::max(d_target_to_poly, dist_poly({std::cos(t), std::sin(t)}));
        }
    } else {
        const double a = spec.rect_a, b = spec.rect_b;
        const double perim = 2 * (a + b);
        for (int i = 0; i < samples; ++i) {
            double s = perim * i / samples;
            complexd p;
            if (s < a)
                p = {s, 0};
            else if (s < a + b)
                p = {a, s - a};
            else if (s < 2 * a + b)
                p = {2 * a + b - s, b};
            else
                p = {0, perim - s};
            d_target_to_poly = std::max(d_target_to_poly, dist_poly(p));
        }
    }
    return std::max(d_poly_to_target, d_target_to_poly);
}

static TemperleyanRegion approximate_rectangle(const DomainSpec& spec, double eps) {
    const int m = nearest_odd(spec.rect_a / eps);
    const int n = nearest_odd(spec.rect_b / eps);
    Polyomino parent = build_even_rectangle(m, n, eps);
    const Cell root = pick_root(parent, spec.basepoint, eps);
    TemperleyanRegion region = make_temperleyan(parent, root);
    if (!region.empty()) {
        const double hd = boundary_hausdorff_distance(region, spec);
        if (hd > 2.0 * eps + 1e-12)
            throw Error(ErrorKind::Resolution,
                        "rectangle staircase misses the boundary by more than 2*epsilon");
    }
    return region;
}

static TemperleyanRegion approximate_disk(const DomainSpec& spec, double eps) {
    const double radius_lattice = 1.0 / eps;
    const int reach = int(std::ceil(radius_lattice / 2.0)) + 2;
    // The block union (2x2 even blocks) dilated by one cell in +x and +y has
    // even corner squares at every corner; the inclusion margin is chosen per
    // epsilon as the first value meeting the 2*epsilon Hausdorff budget.
    const double margins[] = {-0.25, 0.0, -0.5, 0.25, -0.75, 0.5, -1.0};
    std::string last_failure = "no candidate margin produced a valid staircase";
    for (double margin : margins) {
        std::vector<Cell> cells;
        for (int p = -reach; p <= reach; ++p) {
            for (int q = -reach; q <= reach; ++q) {
                const double cx = 2.0 * p + 1.5, cy = 2.0 * q + 1.5;
                if (std::hypot(cx, cy) > radius_lattice + margin) continue;
                for (int dx = 0; dx < 3; ++dx)
                    for (int dy = 0; dy < 3; ++dy) cells.push_back({2 * p + dx, 2 * q + dy});
            }
        }
        if (cells.empty()) continue;
        try {
            Polyomino parent = Polyomino::from_cells(std::move(cells), eps);
            if (!parent.is_even()) {
                last_failure = "staircase corner parity failed";
                continue;
            }
            const Cell root = pick_root(parent, spec.basepoint, eps);
            TemperleyanRegion region = make_temperleyan(parent, root);
            const double hd = boundary_hausdorff_distance(region, spec);
            if (hd > 2.0 * eps + 1e-12) {
                last_failure = "staircase misses the circle by more than 2*epsilon";
                continue;
            }
            return region;
        } catch (const Error& e) {
            last_failure = e.what();
        }
    }
    throw Error(ErrorKind::Resolution, std::string("disk approximation failed: ") + last_failure);
}

TemperleyanRegion approximate_domain(const DomainSpec& spec, double epsilon) {
    if (epsilon <= 0.0) throw Error(ErrorKind::Contract, "epsilon must be positive");
    switch (spec.kind) {
        case DomainSpec::Kind::Rectangle:
            return approximate_rectangle(spec, epsilon);
        case DomainSpec::Kind::Disk:
            return approximate_disk(spec, epsilon);
        default:
            throw Error(ErrorKind::UnsupportedRegion, "only rectangle and disk are approximable");
    }
}

ValidationReport validate_temperleyan(const TemperleyanRegion& region) {
    ValidationReport report;
    auto add = [&](const std::string& name, bool ok, const std::string& detail) {
        report.checks.push_back({name, ok, detail});
    };

    bool corner_parity = true;
    for (const Corner& c : region.parent.corners())
        if (!cell_is_even(c.square)) corner_parity = false;
    add("cornerParity", corner_parity, "all parent corner squares even");

    add("rootParity", cell_is_even(region.root), "root has corner-square parity");
    add("rootPlacement",
        region.parent.contains(region.root) && region.parent.cell_on_boundary(region.root),
        "root is a boundary-adjacent parent cell");

    bool edge_parity = true;
    const auto& corners = region.parent.corners();
    for (size_t i = 0; i < corners.size(); ++i) {
        const Corner& a = corners[i];
        const Corner& b = corners[(i + 1) % corners.size()];
        const int len = std::abs(b.vertex.x - a.vertex.x) + std::abs(b.vertex.y - a.vertex.y);
        const bool same_kind = a.kind == b.kind;
        if (same_kind && len % 2 == 0) edge_parity = false;
        if (!same_kind && len % 2 == 1) edge_parity = false;
    }
    add("edgeParity", edge_parity,
        "edges between like corners are odd, between mixed corners even");

    int black = 0, white = 0;
    for (const Cell& c : region.cells) (cell_is_black(c) ? black : white)++;
    add("balancedColoring", black == white,
        "black cells = " + std::to_string(black) + ", white cells = " + std::to_string(white));

    bool connected = true;
    std::string conn_detail = "region cells connected, boundary simple";
    if (!region.cells.empty()) {
        try {
            std::unordered_set<Cell, IntPairHash> cs(region.cells.begin(), region.cells.end());
            check_connected(region.cells, cs);
            trace_boundary(cs);
        } catch (const Error& e) {
            connected = false;
            conn_detail = e.what();
        }
    }
    add("connectivity", connected, conn_detail);
    return report;
}

bool ValidationReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string ValidationReport::summary() const {
    std::ostringstream out;
    for (const auto& c : checks)
        out << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << "\n";
    return out.str();
}

std::string region_to_json(const TemperleyanRegion& region) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", region.epsilon);
    std::ostringstream out;
    out << "{\"epsilon\":" << buf << ",\"rootCell\":[" << region.root.x << "," << region.root.y
        << "],\"cells\":[";
    for (size_t i = 0; i < region.cells.size(); ++i) {
        if (i) out << ",";
        out << "[" << region.cells[i].x << "," << region.cells[i].y << "]";
    }
    out << "]}";
    return out.str();
}

TemperleyanRegion region_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Io, std::string("region JSON parse failed: ") + e.what());
    }
    if (!j.contains("epsilon") || !j.contains("rootCell") || !j.contains("cells"))
        throw Error(ErrorKind::Io, "region JSON is missing epsilon/rootCell/cells");
    const double eps = j["epsilon"].get<double>();
    const Cell root{j["rootCell"][0].get<int>(), j["rootCell"][1].get<int>()};
    std::vector<Cell> cells;
    for (const auto& item : j["cells"]) cells.push_back({item[0].get<int>(), item[1].get<int>()});
    cells.push_back(root);
    Polyomino parent = Polyomino::from_cells(std::move(cells), eps);
    return make_temperleyan(parent, root);
}

void save_region(const TemperleyanRegion& region, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
    out << region_to_json(region) << "\n";
}

TemperleyanRegion load_region(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return region_from_json(ss.str());
}

} // namespace lattice
} // namespace dimer
