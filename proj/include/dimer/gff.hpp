#ifndef DIMER_GFF_HPP
#define DIMER_GFF_HPP

#include <functional>
#include <string>
#include <vector>

#include "dimer/greens.hpp"
#include "dimer/rng.hpp"
#include "dimer/stats.hpp"

namespace dimer {
namespace gff {

using lattice::DomainSpec;

// Test function with a C1 smoothness tag; eigenmodes carry their indices so
// pairings against the basis can skip quadrature.
struct TestFunction {
    std::function<double(double, double)> f;
    std::string name;
    bool is_c1 = true;
    int eigen_j = 0, eigen_k = 0; // nonzero for exact eigenmodes

    double operator()(double x, double y) const { return f(x, y); }

    static TestFunction zero();
    static TestFunction eigen(const DomainSpec& rect, int j, int k);
    // C2 bump (1 - r^2/rho^2)^3 supported on |z - center| < rho
    static TestFunction bump(complexd center, double rho, double amplitude = 1.0);
};

// Massless-free-field sampler on a rectangle: i.i.d. standard normal
// coefficients on the leading eigenmodes, reproducible per (seed, stream).
class GFFProcess {
  public:
    GFFProcess(const DomainSpec& rect, int mode_count);
    const DomainSpec& domain() const { return rect_; }
    const std::vector<greens::EigenMode>& modes() const { return modes_; }
    int mode_count() const { return int(modes_.size()); }

    std::vector<double> sample_coefficients(uint64_t seed, uint64_t stream) const;
    void sample_coefficients(RngStream& rng, std::vector<double>& out) const;

    // mode sum for E(F(z1) F(z2)) = -g_D at the process truncation
    double covariance_mode_sum(complexd z1, complexd z2) const;

  private:
    DomainSpec rect_;
    std::vector<greens::EigenMode> modes_;
};

// <phi, f_i> inner products against the process modes (tensor quadrature,
// or exact for eigenmode test functions).
class PairedObservable {
  public:
    PairedObservable(const GFFProcess& process, const TestFunction& phi, int quad_points = 0);
    // sum_i c_i <phi, f_i> / sqrt(-lambda_i)
    double pair(const std::vector<double>& coefficients) const;
    double variance_analytic() const; // sum coef^2 / (-lambda)
    double covariance_analytic(const PairedObservable& other) const;
    const std::vector<double>& coefficients() const { return coef_; }
    // sum over modes with index > keep of coef^2/(-lambda) (truncation tail)
    double tail_from(int keep) const;

  private:
    const GFFProcess* process_;
    std::vector<double> coef_;
    std::vector<double> inv_sqrt_neg_lambda_;
};

struct WickEntry {
    std::string label;
    double empirical = 0.0;
    double predicted = 0.0;
    double rel_deviation = 0.0;
};

struct WickReport {
    std::vector<WickEntry> entries;
    double max_rel_deviation = 0.0;
};

// Empirical joint moments of the four paired observables against the Wick
// pairing prediction (second and fourth order).
WickReport wick_check(const GFFProcess& process, const std::vector<TestFunction>& phis,
                      int samples, uint64_t seed);

struct VariancePair {
    double var_u = 0.0;
    double var_v = 0.0;
};

// Var of int omega F_U versus its pullback through a Mobius bijection
// f : V -> U, both by independent quadrature (smooth remainder + Newtonian
// log potential).  omega is the standard C2 bump on U.
VariancePair conformal_invariance_check(const DomainSpec& domain_u, const DomainSpec& domain_v,
                                        const greens::Mobius& map_v_to_u, complexd bump_center,
                                        double bump_radius, int order = 24);

// free-space log potential of the standard radial bump, 1D oracle
double radial_bump_log_potential(double s, double rho);

// int over the domain (numerically) of the bump against the log kernel
// centred at z1; exposed for tests of the potential machinery
double bump_log_potential_polar(complexd z1, complexd bump_center, double rho,
                                const std::function<double(double, double)>& density, int order);

} // namespace gff
} // namespace dimer

#endif
