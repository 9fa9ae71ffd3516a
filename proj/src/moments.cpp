#include "dimer/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dimer/quadrature.hpp"

namespace dimer {
namespace moments {

namespace {
constexpr double kPi = 3.14159265358979323846;

void require_distinct(const std::vector<complexd>& xs) {
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = i + 1; j < xs.size(); ++j)
            if (std::abs(xs[i] - xs[j]) < 1e-12)
                throw Error(ErrorKind::Singularity, "points must be distinct");
}

double dist_point_segment(complexd p, complexd a, complexd b) {
    const complexd ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

bool segments_intersect(complexd a, complexd b, complexd c, complexd d) {
    auto cross = [](complexd u, complexd v) { return u.real() * v.imag() - u.imag() * v.real(); };
    const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double segment_distance(complexd a, complexd b, complexd c, complexd d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(dist_point_segment(a, c, d), dist_point_segment(b, c, d)),
                    std::min(dist_point_segment(c, a, b), dist_point_segment(d, a, b)));
}

// determinant of a small complex matrix, in place
complexd small_det(std::vector<complexd>& m, int n) {
    complexd det(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m[size_t(k) * n + k]);
        for (int r = k + 1; r < n; ++r) {
            const double v = std::abs(m[size_t(r) * n + k]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return complexd(0.0, 0.0);
        if (piv != k) {
            for (int c = 0; c < n; ++c) std::swap(m[size_t(piv) * n + c], m[size_t(k) * n + c]);
            det = -det;
        }
        const complexd pivot = m[size_t(k) * n + k];
        det *= pivot;
        for (int r = k + 1; r < n; ++r) {
            const complexd f = m[size_t(r) * n + k] / pivot;
            if (f == complexd(0.0, 0.0)) continue;
            for (int c = k; c < n; ++c) m[size_t(r) * n + c] -= f * m[size_t(k) * n + c];
        }
    }
    return det;
}

void pairings_rec(std::vector<int>& left, std::vector<std::pair<int, int>>& cur,
                  std::vector<std::vector<std::pair<int, int>>>& out) {
    if (left.empty()) {
        out.push_back(cur);
        return;
    }
    const int first = left.front();
    for (size_t i = 1; i < left.size(); ++i) {
        std::vector<int> rest;
        for (size_t j = 1; j < left.size(); ++j)
            if (j != i) rest.push_back(left[j]);
        cur.push_back({first, left[i]});
        pairings_rec(rest, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<std::vector<std::pair<int, int>>> enumerate_pairings(int k) {
    if (k < 0 || k % 2 != 0) throw Error(ErrorKind::Arity, "pairings need even k");
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> cur;
    pairings_rec(idx, cur, out);
    return out;
}

complexd pairing_det(const std::vector<complexd>& xs) {
    require_distinct(xs);
    const int k = int(xs.size());
    if (k % 2 == 1) return complexd(0.0, 0.0); // antisymmetric, odd dimension
    std::vector<complexd> m(size_t(k) * k, complexd(0.0, 0.0));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (i != j) m[size_t(i) * k + j] = 1.0 / (xs[j] - xs[i]);
    return small_det(m, k);
}

complexd pairing_sum(const std::vector<complexd>& xs) {
    const int k = int(xs.size());
    if (k % 2 != 0) throw Error(ErrorKind::Arity, "pairing sum needs even k");
    require_distinct(xs);
    complexd total(0.0, 0.0);
    for (const auto& pairing : enumerate_pairings(k)) {
        complexd prod(1.0, 0.0);
        for (const auto& [a, b] : pairing) {
            const complexd d = xs[a] - xs[b];
            prod /= d * d;
        }
        total += prod;
    }
    return total;
}

double two_point_closed(complexd p, complexd q) {
    if (p.imag() <= 0.0 || q.imag() <= 0.0)
        throw Error(ErrorKind::Domain, "points must lie in the upper half-plane");
    if (std::abs(p - q) < 1e-13) throw Error(ErrorKind::Singularity, "coincident points");
    return 8.0 / (kPi * kPi) * std::log(std::abs((std::conj(p) - q) / (p - q)));
}

PathFamily default_paths_halfplane(const std::vector<complexd>& endpoints) {
    require_distinct(endpoints);
    const int k = int(endpoints.size());
    for (const complexd& z : endpoints)
        if (z.imag() <= 0.0) throw Error(ErrorKind::Domain, "endpoints must be interior");
    double min_pair = 1e300;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) min_pair = std::min(min_pair, std::abs(endpoints[i] - endpoints[j]));
    if (k == 1) min_pair = std::abs(endpoints[0].imag());
    const double delta_min = 0.05 * min_pair;
    const double foot_y = 1e-9; // paths start just inside the boundary
    double jitter = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
        PathFamily family;
        for (int i = 0; i < k; ++i) {
            IntegrationPath path;
            path.points = {complexd(endpoints[i].real() + jitter * (i + 1), foot_y), endpoints[i]};
            family.paths.push_back(std::move(path));
        }
        double sep = 1e300;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                sep = std::min(sep, path_distance(family.paths[i], family.paths[j]));
        if (k == 1) sep = 1e300;
        if (sep >= delta_min) {
            family.min_separation = sep;
            return family;
        }
        // start well above the minimum separation: wide spacing keeps the
        // moment integrands away from their ridges
        jitter = jitter == 0.0 ? 4.0 * delta_min : jitter * 1.618;
    }
    throw Error(ErrorKind::PathDisjointness, "could not build a disjoint path family");
}

double path_distance(const IntegrationPath& a, const IntegrationPath& b) {
    double d = 1e300;
    for (size_t i = 0; i + 1 < a.points.size(); ++i)
        for (size_t j = 0; j + 1 < b.points.size(); ++j)
            d = std::min(d, segment_distance(a.points[i], a.points[i + 1], b.points[j],
                                             b.points[j + 1]));
    return d;
}

namespace {

struct PathNodes {
    std::vector<complexd> z;      // node positions
    std::vector<complexd> w;      // GL weight times dz/dt at the node
};

PathNodes discretize(const IntegrationPath& path, int order, int panels) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    PathNodes nodes;
    for (size_t s = 0; s + 1 < path.points.size(); ++s) {
        const complexd a = path.points[s], b = path.points[s + 1];
        for (int p = 0; p < panels; ++p) {
            const complexd pa = a + (b - a) * (double(p) / panels);
            const complexd pb = a + (b - a) * (double(p + 1) / panels);
            const complexd mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
            for (int i = 0; i < order; ++i) {
                nodes.z.push_back(mid + half * rule.nodes[i]);
                nodes.w.push_back(half * rule.weights[i]);
            }
        }
    }
    return nodes;
}

// the four k=2 terms with the squared-difference kernels
double two_point_terms(const PathNodes& n1, const PathNodes& n2) {
    complexd total(0.0, 0.0);
    const double c = 4.0 / (kPi * kPi);
    for (size_t a = 0; a < n1.z.size(); ++a) {
        const complexd z1 = n1.z[a], w1 = n1.w[a];
        const complexd z1c = std::conj(z1), w1c = std::conj(w1);
        for (size_t b = 0; b < n2.z.size(); ++b) {
            const complexd z2 = n2.z[b], w2 = n2.w[b];
            const complexd z2c = std::conj(z2), w2c = std::conj(w2);
            const complexd t1 = w1 * w2 / ((z2 - z1) * (z2 - z1));
            const complexd t2 = w1c * w2 / ((z2 - z1c) * (z2 - z1c));
            const complexd t3 = w1 * w2c / ((z2c - z1) * (z2c - z1));
            const complexd t4 = w1c * w2c / ((z2c - z1c) * (z2c - z1c));
            total += -t1 + t2 + t3 - t4;
        }
    }
    return (c * total).real();
}

void check_path_contract(const IntegrationPath& path, complexd endpoint) {
    if (path.points.size() < 2) throw Error(ErrorKind::Contract, "path needs at least 2 points");
    if (std::abs(path.endpoint() - endpoint) > 1e-9)
        throw Error(ErrorKind::Contract, "path endpoint does not match the moment point");
    if (std::fabs(path.points.front().imag()) > 1e-5)
        throw Error(ErrorKind::Contract, "path must start on the boundary");
}

} // namespace

MomentResult two_point_quadrature(complexd p, complexd q, const IntegrationPath& gamma1,
                                  const IntegrationPath& gamma2) {
    check_path_contract(gamma1, p);
    check_path_contract(gamma2, q);
    if (path_distance(gamma1, gamma2) <= 1e-12)
        throw Error(ErrorKind::PathDisjointness, "integration paths intersect");
    MomentResult res;
    res.method = Method::Quadrature;
    const int order = 32;
    double prev = 0.0;
    for (int level = 0;; ++level) {
        const int panels = 1 << level;
        const PathNodes n1 = discretize(gamma1, order, panels);
        const PathNodes n2 = discretize(gamma2, order, panels);
        const double cur = two_point_terms(n1, n2);
        if (level > 0) {
            res.error_estimate = std::fabs(cur - prev);
            res.value = cur;
            if (res.error_estimate < 1e-8 || level >= 6) return res;
        }
        prev = cur;
    }
}

MomentResult sign_sum_moment_quadrature(const std::vector<complexd>& points,
                                        const PathFamily& family, double rel_tol) {
    const int k = int(points.size());
    if (k != 2 && k != 4)
        throw Error(ErrorKind::Arity, "sign-sum quadrature oracle covers k in {2, 4}");
    if (int(family.paths.size()) != k)
        throw Error(ErrorKind::Contract, "one path per point required");
    for (int i = 0; i < k; ++i) check_path_contract(family.paths[i], points[i]);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (path_distance(family.paths[i], family.paths[j]) <= 1e-12)
                throw Error(ErrorKind::PathDisjointness, "integration paths intersect");

    auto evaluate = [&](int order, int panels) {
        std::vector<PathNodes> nodes;
        nodes.reserve(k);
        for (const auto& path : family.paths) nodes.push_back(discretize(path, order, panels));
        complexd total(0.0, 0.0);
        std::vector<complexd> zs(k), ws(k), m(size_t(k) * k);
        const int n_eps = 1 << k;
        std::vector<size_t> sizes(k);
        for (int i = 0; i < k; ++i) sizes[i] = nodes[i].z.size();
        std::vector<size_t> tuple(k, 0);
        // iterate over all node tuples; sign vectors come in conjugate pairs,
        // so only those with the last sign positive are evaluated
        while (true) {
            for (int i = 0; i < k; ++i) {
                zs[i] = nodes[i].z[tuple[i]];
                ws[i] = nodes[i].w[tuple[i]];
            }
            complexd tuple_sum(0.0, 0.0);
            for (int eps = 0; eps < n_eps / 2; ++eps) {
                complexd weight = ws[k - 1]; // last sign fixed positive
                int sign = 1;
                std::array<complexd, 8> pts;
                pts[k - 1] = zs[k - 1];
                for (int i = 0; i < k - 1; ++i) {
                    const bool plus = (eps >> i) & 1;
                    pts[i] = plus ? zs[i] : std::conj(zs[i]);
                    weight *= plus ? ws[i] : std::conj(ws[i]);
                    sign *= plus ? 1 : -1;
                }
                complexd det;
                if (k == 2) {
                    const complexd a = 2.0 / (kPi * (pts[1] - pts[0]));
                    det = a * a; // -m01 m10 with m10 = -m01
                } else {
                    for (int i = 0; i < k; ++i)
                        for (int j = i + 1; j < k; ++j) {
                            const complexd e = 2.0 / (kPi * (pts[j] - pts[i]));
                            m[size_t(i) * k + j] = e;
                            m[size_t(j) * k + i] = -e;
                        }
                    const complexd* a = m.data();
                    // antisymmetric 4x4 determinant: (af - be + cd)^2 with
                    // a..f the above-diagonal entries
                    const complexd pf = a[1] * a[11] - a[2] * a[7] + a[3] * a[6];
                    det = pf * pf;
                }
                tuple_sum += double(sign) * weight * det;
            }
            total += tuple_sum;
            int carry = 0;
            while (carry < k && ++tuple[carry] == sizes[carry]) {
                tuple[carry] = 0;
                ++carry;
            }
            if (carry == k) break;
        }
        // conjugate halves double the real part; orientation fixed relative
        // to the printed sign-vector expansion
        const double parity = (k / 2) % 2 == 0 ? 1.0 : -1.0;
        return parity * 2.0 * total.real();
    };

    MomentResult res;
    res.method = Method::Quadrature;
    const std::pair<int, int> ladder[] = {{12, 1}, {14, 2}, {16, 3}, {18, 4}};
    double prev = evaluate(ladder[0].first, ladder[0].second);
    for (size_t i = 1; i < sizeof(ladder) / sizeof(ladder[0]); ++i) {
        const double cur = evaluate(ladder[i].first, ladder[i].second);
        res.value = cur;
        res.error_estimate = std::fabs(cur - prev);
        if (res.error_estimate <= rel_tol * std::max(1.0, std::fabs(cur))) return res;
        prev = cur;
    }
    return res;
}

MomentResult k_point_moment(const DomainSpec& domain, const std::vector<complexd>& points) {
    require_distinct(points);
    for (const complexd& z : points)
        if (!greens::domain_contains(domain, z))
            throw Error(ErrorKind::Domain, "moment points must be interior");
    MomentResult res;
    res.method = Method::PairingSum;
    const int k = int(points.size());
    if (k % 2 == 1) {
        res.value = 0.0;
        return res;
    }
    double total = 0.0;
    for (const auto& pairing : enumerate_pairings(k)) {
        double prod = 1.0;
        for (const auto& [a, b] : pairing) prod *= greens::g_dirichlet(domain, points[a], points[b]);
        total += prod;
    }
    res.value = std::pow(-16.0 / kPi, k / 2) * total;
    return res;
}

} // namespace moments
} // namespace dimer
