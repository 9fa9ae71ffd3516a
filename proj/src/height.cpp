#include "dimer/height.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace dimer {
namespace height {

namespace {

std::vector<Vertex> vertices_of_cells(const std::vector<Cell>& cells) {
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

HeightEngine::HeightEngine(const lattice::TemperleyanRegion& region) {
    epsilon_ = region.epsilon;
    boundary_ = region.boundary;
    if (!region.cells.empty()) reference_ = region.reference_vertex();
    build(region.cells);
}

HeightEngine::HeightEngine(std::vector<Cell> cells, double epsilon, Vertex reference) {
    epsilon_ = epsilon;
    reference_ = reference;
    build(std::move(cells));
}

void HeightEngine::build(std::vector<Cell> cells) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    cells_ = std::move(cells);
    for (int i = 0; i < int(cells_.size()); ++i) cell_index_[cells_[i]] = i;
    vertices_ = vertices_of_cells(cells_);
    incident_.assign(vertices_.size(), {});
    auto cell_at = [&](int x, int y) {
        auto it = cell_index_.find({x, y});
        return it == cell_index_.end() ? -1 : it->second;
    };
    // one undirected edge per vertical/horizontal lattice edge of the region
    for (int vi = 0; vi < int(vertices_.size()); ++vi) {
        const Vertex v = vertices_[vi];
        // east edge v -> (x+1, y): left cell (x, y), right cell (x, y-1)
        {
            const int to = vertex_index({v.x + 1, v.y});
            const int lc = cell_at(v.x, v.y), rc = cell_at(v.x, v.y - 1);
            if (to >= 0 && (lc >= 0 || rc >= 0)) {
                edges_.push_back({vi, to, lc, rc});
                incident_[vi].push_back(int(edges_.size()) - 1);
                incident_[to].push_back(int(edges_.size()) - 1);
            }
        }
        // north edge v -> (x, y+1): left cell (x-1, y), right cell (x, y)
        {
            const int to = vertex_index({v.x, v.y + 1});
            const int lc = cell_at(v.x - 1, v.y), rc = cell_at(v.x, v.y);
            if (to >= 0 && (lc >= 0 || rc >= 0)) {
                edges_.push_back({vi, to, lc, rc});
                incident_[vi].push_back(int(edges_.size()) - 1);
                incident_[to].push_back(int(edges_.size()) - 1);
            }
        }
    }
    if (!vertices_.empty() && vertex_index(reference_) < 0)
        throw Error(ErrorKind::Contract, "reference vertex is not a region vertex");
}

int HeightEngine::vertex_index(Vertex v) const {
    auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end() || !(*it == v)) return -1;
    return int(it - vertices_.begin());
}

std::vector<int> HeightEngine::partner_array(const Tiling& tiling) const {
    std::vector<int> partner(cells_.size(), -1);
    for (const Domino& d : tiling.dominoes) {
        auto a = cell_index_.find(d.cell);
        auto b = cell_index_.find(d.partner());
        if (a == cell_index_.end() || b == cell_index_.end())
            throw Error(ErrorKind::Structure, "tiling uses a cell outside the region");
        if (partner[a->second] != -1 || partner[b->second] != -1)
            throw Error(ErrorKind::Structure, "tiling covers a cell twice");
        partner[a->second] = b->second;
        partner[b->second] = a->second;
    }
    for (int p : partner)
        if (p < 0) throw Error(ErrorKind::Structure, "tiling leaves a cell uncovered");
    return partner;
}

// signed height increment along the edge taken from e.from to e.to
int HeightEngine::delta_along(const Edge& e, const std::vector<int>& partner) const {
    const bool crossed =
        e.left_cell >= 0 && e.right_cell >= 0 && partner[e.left_cell] == e.right_cell;
    if (e.left_cell >= 0) {
        const int sign = cell_is_black(cells_[e.left_cell]) ? 1 : -1;
        return sign * (crossed ? -3 : 1);
    }
    const int sign = cell_is_black(cells_[e.right_cell]) ? 1 : -1;
    return -sign; // boundary edge, interior on the right
}

void HeightEngine::compute(const Tiling& tiling, std::vector<int>& out) const {
    const std::vector<int> partner = partner_array(tiling);
    out.assign(vertices_.size(), 0);
    if (vertices_.empty()) return;
    std::vector<char> seen(vertices_.size(), 0);
    const int ref = vertex_index(reference_);
    std::queue<int> queue;
    queue.push(ref);
    seen[ref] = 1;
    out[ref] = 0;
    while (!queue.empty()) {
        const int vi = queue.front();
        queue.pop();
        for (const int ei : incident_[vi]) {
            const Edge& e = edges_[ei];
            const int other = e.from == vi ? e.to : e.from;
            const int d = delta_along(e, partner);
            const int value = e.from == vi ? out[vi] + d : out[vi] - d;
            if (!seen[other]) {
                seen[other] = 1;
                out[other] = value;
                queue.push(other);
            } else if (out[other] != value) {
                throw Error(ErrorKind::Structure,
                            "height function inconsistent: invalid tiling");
            }
        }
    }
    for (char s : seen)
        if (!s) throw Error(ErrorKind::Structure, "vertex graph is disconnected");
}

HeightField HeightEngine::compute(const Tiling& tiling) const {
    HeightField f;
    f.reference = reference_;
    compute(tiling, f.values);
    return f;
}

bool HeightEngine::face_rule_holds(const std::vector<int>& values) const {
    for (const Cell& c : cells_) {
        int h[4] = {values[vertex_index({c.x, c.y})], values[vertex_index({c.x + 1, c.y})],
                    values[vertex_index({c.x, c.y + 1})],
                    values[vertex_index({c.x + 1, c.y + 1})]};
        std::sort(h, h + 4);
        if (h[1] != h[0] + 1 || h[2] != h[0] + 2 || h[3] != h[0] + 3) return false;
    }
    return true;
}

bool HeightEngine::boundary_rule_holds(const std::vector<int>& values) const {
    const size_t n = boundary_.size();
    for (size_t i = 0; i < n; ++i) {
        const int a = vertex_index(boundary_[i]);
        const int b = vertex_index(boundary_[(i + 1) % n]);
        if (a < 0 || b < 0) return false;
        if (std::abs(values[a] - values[b]) != 1) return false;
    }
    return true;
}

Vertex HeightEngine::nearest_vertex(complexd point) const {
    const double ux = point.real() / epsilon_, uy = point.imag() / epsilon_;
    const int cx = int(std::floor(ux)), cy = int(std::floor(uy));
    Vertex best{};
    double best_d = 1e300;
    bool found = false;
    for (int dx = -1; dx <= 2; ++dx) {
        for (int dy = -1; dy <= 2; ++dy) {
            const Vertex v{cx + dx, cy + dy};
            if (vertex_index(v) < 0) continue;
            const double d = std::hypot(v.x - ux, v.y - uy);
            if (!found || d < best_d - 1e-12 || (std::fabs(d - best_d) <= 1e-12 && v < best)) {
                best = v;
                best_d = d;
                found = true;
            }
        }
    }
    if (!found || best_d * epsilon_ > 2.0 * epsilon_ + 1e-12)
        throw Error(ErrorKind::Domain, "no region vertex within 2*epsilon of the point");
    return best;
}

double HeightEngine::smoothed_observable(const std::vector<double>& values,
                                         const std::function<double(double, double)>& phi) const {
    double sum = 0.0;
    for (size_t i = 0; i < vertices_.size(); ++i)
        sum += phi(epsilon_ * vertices_[i].x, epsilon_ * vertices_[i].y) * values[i];
    return epsilon_ * epsilon_ * sum;
}

double HeightEngine::smoothed_observable(const std::vector<int>& values,
                                         const std::function<double(double, double)>& phi) const {
    double sum = 0.0;
    for (size_t i = 0; i < vertices_.size(); ++i)
        sum += phi(epsilon_ * vertices_[i].x, epsilon_ * vertices_[i].y) * values[i];
    return epsilon_ * epsilon_ * sum;
}

HeightField height_function(const lattice::TemperleyanRegion& region, const Tiling& tiling) {
    return HeightEngine(region).compute(tiling);
}

std::pair<std::vector<CenteredField>, MeanField> center(const std::vector<HeightField>& samples) {
    if (samples.size() < 2) throw Error(ErrorKind::Contract, "centering needs at least 2 samples");
    const size_t nv = samples.front().values.size();
    MeanField mean;
    mean.count = (long long)(samples.size());
    mean.sums.assign(nv, 0);
    for (const HeightField& f : samples) {
        if (f.values.size() != nv) throw Error(ErrorKind::Shape, "samples on different regions");
        for (size_t i = 0; i < nv; ++i) mean.sums[i] += f.values[i];
    }
    std::vector<CenteredField> centered(samples.size());
    for (size_t s = 0; s < samples.size(); ++s) {
        centered[s].denominator = mean.count;
        centered[s].numerators.resize(nv);
        for (size_t i = 0; i < nv; ++i)
            centered[s].numerators[i] = (long long)(samples[s].values[i]) * mean.count - mean.sums[i];
    }
    return {std::move(centered), std::move(mean)};
}

// ---- mean-height prediction -------------------------------------------------

struct MeanPredictor {
    static std::vector<double> run(const lattice::TemperleyanRegion& region) {
        HeightEngine engine(region);
        const auto& path = region.boundary;
        if (path.empty()) throw Error(ErrorKind::Contract, "empty region");
        const size_t n = path.size();
        // rotate the boundary path to start at the reference vertex
        size_t start = 0;
        bool found = false;
        for (size_t i = 0; i < n; ++i)
            if (path[i] == engine.reference()) {
                start = i;
                found = true;
                break;
            }
        if (!found) throw Error(ErrorKind::Internal, "reference vertex not on the boundary");

        // accumulated turning (convex +1, concave -1) and the deterministic
        // boundary heights along the same walk
        std::vector<double> turning(n, 0.0);
        std::vector<int> det_height(n, 0);
        const std::vector<int> no_partner(engine.cells_.size(), -1);
        auto vertex_at = [&](size_t i) { return path[(start + i) % n]; };
        for (size_t i = 1; i < n; ++i) {
            const Vertex prev = vertex_at(i - 1), cur = vertex_at(i);
            // turning at the previous vertex (skipped for the start vertex)
            if (i >= 2) {
                const Vertex pp = vertex_at(i - 2);
                const int cross = (prev.x - pp.x) * (cur.y - prev.y) - (prev.y - pp.y) * (cur.x - prev.x);
                turning[i] = turning[i - 1] + (cross > 0 ? 1.0 : (cross < 0 ? -1.0 : 0.0));
            } else {
                turning[i] = turning[i - 1];
            }
            // deterministic boundary step (boundary edges carry no dominoes)
            const int from = engine.vertex_index(prev), to = engine.vertex_index(cur);
            int delta = 0;
            bool edge_found = false;
            for (int ei : engine.incident_[from]) {
                const auto& e = engine.edges_[ei];
                if (e.from == from && e.to == to) {
                    delta = engine.delta_along(e, no_partner);
                    edge_found = true;
                    break;
                }
                if (e.to == from && e.from == to) {
                    delta = -engine.delta_along(e, no_partner);
                    edge_found = true;
                    break;
                }
            }
            if (!edge_found) throw Error(ErrorKind::Internal, "boundary edge missing");
            det_height[i] = det_height[i - 1] + delta;
        }
        // pin the additive constant against the deterministic boundary anchor
        double offset = 0.0;
        for (size_t i = 0; i < n; ++i) offset += det_height[i] - turning[i];
        offset /= double(n);

        const auto& vertices = engine.vertices();
        std::vector<double> data(vertices.size(), 0.0);
        std::vector<char> is_boundary(vertices.size(), 0);
        for (size_t i = 0; i < n; ++i) {
            const int vi = engine.vertex_index(vertex_at(i));
            is_boundary[vi] = 1;
            data[vi] = turning[i] + offset;
        }

        // conjugate gradient on the interior 5-point Laplacian
        std::vector<int> interior;
        std::vector<int> pos(vertices.size(), -1);
        for (size_t i = 0; i < vertices.size(); ++i) {
            if (!is_boundary[i]) {
                pos[i] = int(interior.size());
                interior.push_back(int(i));
            }
        }
        const int ni = int(interior.size());
        std::vector<std::array<int, 4>> nbrs(ni);
        std::vector<double> rhs(ni, 0.0);
        for (int k = 0; k < ni; ++k) {
            const Vertex v = vertices[interior[k]];
            const Vertex around[4] = {{v.x + 1, v.y}, {v.x - 1, v.y}, {v.x, v.y + 1}, {v.x, v.y - 1}};
            for (int t = 0; t < 4; ++t) {
                const int vi = engine.vertex_index(around[t]);
                if (vi < 0) throw Error(ErrorKind::Internal, "interior vertex misses a neighbor");
                if (is_boundary[vi]) {
                    nbrs[k][t] = -1;
                    rhs[k] += data[vi];
                } else {
                    nbrs[k][t] = pos[vi];
                }
            }
        }
        std::vector<double> x(ni, 0.0), r(rhs), p(rhs), ap(ni);
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            for (int k = 0; k < ni; ++k) {
                double v = 4.0 * in[k];
                for (int t = 0; t < 4; ++t)
                    if (nbrs[k][t] >= 0) v -= in[nbrs[k][t]];
                out[k] = v;
            }
        };
        double rr = 0.0;
        for (double v : r) rr += v * v;
        const double tol = std::max(1e-20, rr * 1e-24);
        for (int iter = 0; iter < 20 * std::max(ni, 1) && rr > tol; ++iter) {
            apply(p, ap);
            double pap = 0.0;
            for (int k = 0; k < ni; ++k) pap += p[k] * ap[k];
            if (pap == 0.0) break;
            const double alpha = rr / pap;
            double rr_new = 0.0;
            for (int k = 0; k < ni; ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * ap[k];
                rr_new += r[k] * r[k];
            }
            const double beta = rr_new / rr;
            rr = rr_new;
            for (int k = 0; k < ni; ++k) p[k] = r[k] + beta * p[k];
        }
        std::vector<double> out(vertices.size(), 0.0);
        for (size_t i = 0; i < vertices.size(); ++i)
            out[i] = is_boundary[i] ? data[i] : x[pos[i]];
        return out;
    }
};

std::vector<double> predict_mean_height(const lattice::TemperleyanRegion& region) {
    return MeanPredictor::run(region);
}

CovarianceEstimate covariance_empirical(const HeightEngine& engine,
                                        const std::vector<HeightField>& samples, complexd p,
                                        complexd q) {
    const Vertex vp = engine.nearest_vertex(p);
    const Vertex vq = engine.nearest_vertex(q);
    if (vp == vq)
        throw Error(ErrorKind::DegeneratePair,
                    "points collapse onto one vertex (pointwise variance diverges)");
    const int ip = engine.vertex_index(vp), iq = engine.vertex_index(vq);
    std::vector<double> xs(samples.size()), ys(samples.size());
    for (size_t s = 0; s < samples.size(); ++s) {
        xs[s] = samples[s].values[ip];
        ys[s] = samples[s].values[iq];
    }
    return covariance_jackknife(xs, ys);
}

std::string height_csv(const HeightEngine& engine, const std::vector<int>& values) {
    const auto& vs = engine.vertices();
    if (vs.empty()) return "# empty region\n";
    int minx = vs[0].x, maxx = vs[0].x, miny = vs[0].y, maxy = vs[0].y;
    for (const Vertex& v : vs) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    std::ostringstream out;
    out << "# heights, rows y=" << maxy << ".." << miny << ", cols x=" << minx << ".." << maxx
        << ", * outside\n";
    for (int y = maxy; y >= miny; --y) {
        for (int x = minx; x <= maxx; ++x) {
            if (x > minx) out << ',';
            const int vi = engine.vertex_index({x, y});
            if (vi < 0)
                out << '*';
            else
                out << values[vi];
        }
        out << '\n';
    }
    return out.str();
}

} // namespace height
} // namespace dimer
