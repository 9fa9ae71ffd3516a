#ifndef DIMER_GREENS_HPP
#define DIMER_GREENS_HPP

#include <vector>

#include "dimer/common.hpp"
#include "dimer/lattice.hpp"

namespace dimer {
namespace greens {

using lattice::DomainSpec;

// Mobius transform z -> (a z + b) / (c z + d).
struct Mobius {
    complexd a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
    complexd operator()(complexd z) const { return (a * z + b) / (c * z + d); }
    complexd derivative(complexd z) const {
        const complexd den = c * z + d;
        return (a * d - b * c) / (den * den);
    }
    Mobius inverse() const { return {d, -b, -c, a}; }
    Mobius compose(const Mobius& g) const { // (*this) after g
        return {a * g.a + b * g.c, a * g.b + b * g.d, c * g.a + d * g.c, c * g.b + d * g.d};
    }
};

// unit disk -> upper half-plane, basepoint -1 -> infinity
Mobius cayley_disk_to_halfplane();
// disk automorphism z -> e^{i rot} (z - a) / (1 - conj(a) z)
Mobius disk_automorphism(complexd a, double rot = 0.0);

bool domain_contains(const DomainSpec& domain, complexd z);

// Dirichlet Green's function: half-plane closed form, disk by Mobius
// pullback, rectangle by reflection images resummed one axis at a time
// (exponentially convergent strip sums).
double g_dirichlet(const DomainSpec& domain, complexd z1, complexd z2);

// disk closed form (independent route for the covariance tests)
double g_disk_closed(complexd z1, complexd z2);

// Laplacian eigenmodes of the rectangle with Dirichlet conditions,
// f_{jk}(x,y) = 2/sqrt(ab) sin(pi j x / a) sin(pi k y / b),
// lambda_{jk} = -pi^2 (j^2/a^2 + k^2/b^2).
struct EigenMode {
    int j = 1, k = 1;
    double eigenvalue = 0.0;
};

double eigenfunction(const DomainSpec& rect, int j, int k, double x, double y);
double eigenvalue(const DomainSpec& rect, int j, int k);
// first `count` modes ordered by |lambda|, then (j, k)
std::vector<EigenMode> eigenmodes(const DomainSpec& rect, int count);

// Partial spectral sum over modes with j, k <= per_axis_cutoff.
double spectral_gd_check(const DomainSpec& rect, complexd z1, complexd z2, int per_axis_cutoff);

// Analytic Neumann difference g~_N(z1, z2) - g~_N(z1', z2); the imaginary
// part is continued along the straight segment from the boundary anchor
// below z2, and `winding` counts full turns relative to the principal value.
struct NeumannDiff {
    complexd value{0, 0};
    int winding = 0;
};
NeumannDiff neumann_diff(const DomainSpec& domain, complexd z1, complexd z1p, complexd z2);

struct FKernelValue {
    complexd fplus{0, 0};
    complexd fminus{0, 0};
};
// Half-plane: F+ = 2/(pi (z2 - z1)), F- = 2/(pi (z2 - conj z1)); disk by
// conformal transport through the Cayley map.  Both vanish as z2 -> basepoint.
FKernelValue f_kernels(const DomainSpec& domain, complexd z1, complexd z2);

} // namespace greens
} // namespace dimer

#endif
