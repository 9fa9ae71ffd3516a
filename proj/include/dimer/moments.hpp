#ifndef DIMER_MOMENTS_HPP
#define DIMER_MOMENTS_HPP

#include <utility>
#include <vector>

#include "dimer/greens.hpp"

namespace dimer {
namespace moments {

using lattice::DomainSpec;

// Piecewise-linear path from a boundary point to an interior endpoint.
struct IntegrationPath {
    std::vector<complexd> points; // front() on the boundary, back() the endpoint
    complexd endpoint() const { return points.back(); }
};

struct PathFamily {
    std::vector<IntegrationPath> paths;
    double min_separation = 0.0; // measured pairwise distance
};

// Near-vertical segments from just inside the real axis, horizontally
// jittered (deterministically) until the family is pairwise disjoint with
// separation at least 0.05 x the minimum pairwise endpoint distance.
PathFamily default_paths_halfplane(const std::vector<complexd>& endpoints);

// minimum distance between two polylines (0 when they intersect)
double path_distance(const IntegrationPath& a, const IntegrationPath& b);

enum class Method { ClosedForm, Quadrature, PairingSum, MonteCarlo };

struct MomentResult {
    double value = 0.0;
    Method method = Method::ClosedForm;
    double error_estimate = 0.0;
};

// det of m_ij = 1/(x_j - x_i) with zero diagonal; identically 0 for odd k.
complexd pairing_det(const std::vector<complexd>& xs);

// sum over all (k-1)!! perfect pairings of prod 1/(x_a - x_b)^2
complexd pairing_sum(const std::vector<complexd>& xs);

// all perfect pairings of {0, ..., k-1}
std::vector<std::vector<std::pair<int, int>>> enumerate_pairings(int k);

// (8/pi^2) Re log((conj p - q)/(p - q)) on the upper half-plane;
// identical to -(16/pi) g_D(p, q).
double two_point_closed(complexd p, complexd q);

// The four double integrals (dz1 dz2, dconj(z1) dz2, dz1 dconj(z2),
// dconj(z1) dconj(z2)) with the squared-difference kernels, by composite
// Gauss-Legendre with panel doubling.  Matches two_point_closed.
MomentResult two_point_quadrature(complexd p, complexd q, const IntegrationPath& gamma1,
                                  const IntegrationPath& gamma2);

// Sign-vector determinant quadrature over path families (half-plane oracle,
// k in {2, 4}).
MomentResult sign_sum_moment_quadrature(const std::vector<complexd>& points,
                                        const PathFamily& family, double rel_tol = 1e-5);

// k odd: exactly 0.  k even: (-16/pi)^(k/2) sum over pairings of products of
// Dirichlet Green's functions.
MomentResult k_point_moment(const DomainSpec& domain, const std::vector<complexd>& points);

} // namespace moments
} // namespace dimer

#endif
