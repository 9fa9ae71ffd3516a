#include "dimer/gff.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dimer/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dimer {
namespace gff {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

TestFunction TestFunction::zero() {
    TestFunction t;
    t.f = [](double, double) { return 0.0; };
    t.name = "zero";
    return t;
}

TestFunction TestFunction::eigen(const DomainSpec& rect, int j, int k) {
    if (rect.kind != DomainSpec::Kind::Rectangle)
        throw Error(ErrorKind::Contract, "eigen test function needs a rectangle");
    TestFunction t;
    const double a = rect.rect_a, b = rect.rect_b;
    t.f = [a, b, j, k](double x, double y) {
        return 2.0 / std::sqrt(a * b) * std::sin(kPi * j * x / a) * std::sin(kPi * k * y / b);
    };
    t.name = "eigen:" + std::to_string(j) + "," + std::to_string(k);
    t.eigen_j = j;
    t.eigen_k = k;
    return t;
}

TestFunction TestFunction::bump(complexd center, double rho, double amplitude) {
    if (rho <= 0.0) throw Error(ErrorKind::Contract, "bump radius must be positive");
    TestFunction t;
    t.f = [center, rho, amplitude](double x, double y) {
        const double r2 = std::norm(complexd(x, y) - center) / (rho * rho);
        if (r2 >= 1.0) return 0.0;
        const double u = 1.0 - r2;
        return amplitude * u * u * u;
    };
    t.name = "bump";
    return t;
}

GFFProcess::GFFProcess(const DomainSpec& rect, int mode_count) : rect_(rect) {
    if (mode_count < 1) throw Error(ErrorKind::Contract, "mode count must be >= 1");
    modes_ = greens::eigenmodes(rect, mode_count);
}

std::vector<double> GFFProcess::sample_coefficients(uint64_t seed, uint64_t stream) const {
    RngStream rng(seed, stream);
    std::vector<double> out;
    sample_coefficients(rng, out);
    return out;
}

void GFFProcess::sample_coefficients(RngStream& rng, std::vector<double>& out) const {
    out.resize(modes_.size());
    for (double& c : out) c = rng.next_normal();
}

double GFFProcess::covariance_mode_sum(complexd z1, complexd z2) const {
    double sum = 0.0;
    for (const auto& m : modes_) {
        sum += greens::eigenfunction(rect_, m.j, m.k, z1.real(), z1.imag()) *
               greens::eigenfunction(rect_, m.j, m.k, z2.real(), z2.imag()) / (-m.eigenvalue);
    }
    return sum;
}

PairedObservable::PairedObservable(const GFFProcess& process, const TestFunction& phi,
                                   int quad_points)
    : process_(&process) {
    const auto& modes = process.modes();
    coef_.resize(modes.size(), 0.0);
    inv_sqrt_neg_lambda_.resize(modes.size());
    for (size_t i = 0; i < modes.size(); ++i)
        inv_sqrt_neg_lambda_[i] = 1.0 / std::sqrt(-modes[i].eigenvalue);
    if (!phi.is_c1) throw Error(ErrorKind::Contract, "test function must be C1");
    if (phi.eigen_j > 0 && phi.eigen_k > 0) {
        for (size_t i = 0; i < modes.size(); ++i)
            if (modes[i].j == phi.eigen_j && modes[i].k == phi.eigen_k) coef_[i] = 1.0;
        return;
    }
    int max_j = 1, max_k = 1;
    for (const auto& m : modes) {
        max_j = std::max(max_j, m.j);
        max_k = std::max(max_k, m.k);
    }
    const DomainSpec& rect = process.domain();
    const double a = rect.rect_a, b = rect.rect_b;
    int n = quad_points > 0 ? quad_points : std::max(128, 2 * std::max(max_j, max_k) + 32);
    const GaussLegendreRule& rule = gauss_legendre(n);
    // tensor inner products: coef[j][k] = (2/sqrt(ab)) sum_pq w_p w_q phi sin sin
    std::vector<double> xs(n), ys(n), wx(n), wy(n);
    for (int p = 0; p < n; ++p) {
        xs[p] = 0.5 * a * (1.0 + rule.nodes[p]);
        wx[p] = 0.5 * a * rule.weights[p];
        ys[p] = 0.5 * b * (1.0 + rule.nodes[p]);
        wy[p] = 0.5 * b * rule.weights[p];
    }
    // g[jq] = sum_p wx_p phi(x_p, y_q) sin(pi j x_p / a)
    std::vector<double> g(size_t(max_j + 1) * n, 0.0);
    for (int p = 0; p < n; ++p) {
        std::vector<double> phi_row(n);
        for (int q = 0; q < n; ++q) phi_row[q] = phi(xs[p], ys[q]);
        for (int j = 1; j <= max_j; ++j) {
            const double s = wx[p] * std::sin(kPi * j * xs[p] / a);
            if (s == 0.0) continue;
            double* row = &g[size_t(j) * n];
            for (int q = 0; q < n; ++q) row[q] += s * phi_row[q];
        }
    }
    for (size_t i = 0; i < modes.size(); ++i) {
        const int j = modes[i].j, k = modes[i].k;
        const double* row = &g[size_t(j) * n];
        double sum = 0.0;
        for (int q = 0; q < n; ++q) sum += row[q] * wy[q] * std::sin(kPi * k * ys[q] / b);
        coef_[i] = 2.0 / std::sqrt(a * b) * sum;
    }
}

double PairedObservable::pair(const std::vector<double>& coefficients) const {
    if (coefficients.size() != coef_.size())
        throw Error(ErrorKind::Shape, "coefficient count does not match the process");
    double sum = 0.0;
    for (size_t i = 0; i < coef_.size(); ++i)
        sum += coefficients[i] * coef_[i] * inv_sqrt_neg_lambda_[i];
    return sum;
}

double PairedObservable::variance_analytic() const {
    double sum = 0.0;
    for (size_t i = 0; i < coef_.size(); ++i) {
        const double t = coef_[i] * inv_sqrt_neg_lambda_[i];
        sum += t * t;
    }
    return sum;
}

double PairedObservable::covariance_analytic(const PairedObservable& other) const {
    if (other.coef_.size() != coef_.size())
        throw Error(ErrorKind::Shape, "observables on different processes");
    double sum = 0.0;
    for (size_t i = 0; i < coef_.size(); ++i)
        sum += coef_[i] * other.coef_[i] * inv_sqrt_neg_lambda_[i] * inv_sqrt_neg_lambda_[i];
    return sum;
}

double PairedObservable::tail_from(int keep) const {
    double sum = 0.0;
    for (size_t i = size_t(std::max(keep, 0)); i < coef_.size(); ++i) {
        const double t = coef_[i] * inv_sqrt_neg_lambda_[i];
        sum += t * t;
    }
    return sum;
}

WickReport wick_check(const GFFProcess& process, const std::vector<TestFunction>& phis,
                      int samples, uint64_t seed) {
    if (phis.size() != 4) throw Error(ErrorKind::Contract, "wick_check expects 4 test functions");
    if (samples < 10000) throw Error(ErrorKind::Contract, "wick_check needs >= 10^4 samples");
    std::vector<PairedObservable> obs;
    obs.reserve(4);
    for (const auto& phi : phis) obs.emplace_back(process, phi);

    std::vector<std::array<double, 4>> values(samples);
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> coeff;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int s = 0; s < samples; ++s) {
            RngStream rng(seed, uint64_t(s));
            process.sample_coefficients(rng, coeff);
            for (int a = 0; a < 4; ++a) values[s][a] = obs[a].pair(coeff);
        }
    }

    WickReport report;
    // deviations are measured against the natural scale of the moment, so
    // zero predictions (orthogonal modes) stay meaningful
    auto add = [&](const std::string& label, double emp, double pred, double scale) {
        WickEntry e;
        e.label = label;
        e.empirical = emp;
        e.predicted = pred;
        e.rel_deviation = std::fabs(emp - pred) / std::max(scale, 1e-12);
        report.entries.push_back(e);
        report.max_rel_deviation = std::max(report.max_rel_deviation, e.rel_deviation);
    };
    std::array<double, 4> var;
    for (int a = 0; a < 4; ++a) var[a] = obs[a].variance_analytic();
    for (int a = 0; a < 4; ++a) {
        for (int b = a; b < 4; ++b) {
            double emp = 0.0;
            for (int s = 0; s < samples; ++s) emp += values[s][a] * values[s][b];
            emp /= samples;
            add("E[X" + std::to_string(a + 1) + "X" + std::to_string(b + 1) + "]", emp,
                obs[a].covariance_analytic(obs[b]), std::sqrt(var[a] * var[b]));
        }
    }
    double emp4 = 0.0;
    for (int s = 0; s < samples; ++s)
        emp4 += values[s][0] * values[s][1] * values[s][2] * values[s][3];
    emp4 /= samples;
    const double pred4 = obs[0].covariance_analytic(obs[1]) * obs[2].covariance_analytic(obs[3]) +
                         obs[0].covariance_analytic(obs[2]) * obs[1].covariance_analytic(obs[3]) +
                         obs[0].covariance_analytic(obs[3]) * obs[1].covariance_analytic(obs[2]);
    add("E[X1X2X3X4]", emp4, pred4, std::sqrt(var[0] * var[1] * var[2] * var[3]));
    return report;
}

// ---- conformal invariance ----------------------------------------------------

namespace {

double smooth_greens_part(const DomainSpec& domain, complexd z1, complexd z2) {
    // -g_D minus the log(1/|z1-z2|)/(2 pi) singularity
    switch (domain.kind) {
        case DomainSpec::Kind::HalfPlane:
            return std::log(std::abs(z2 - std::conj(z1))) / kTwoPi;
        case DomainSpec::Kind::Disk:
            return std::log(std::abs(1.0 - std::conj(z1) * z2)) / kTwoPi;
        default:
            throw Error(ErrorKind::UnsupportedRegion, "conformal check: disk or half-plane");
    }
}

void require_bump_inside(const DomainSpec& domain, complexd center, double rho) {
    bool ok = false;
    if (domain.kind == DomainSpec::Kind::HalfPlane) ok = center.imag() > rho;
    if (domain.kind == DomainSpec::Kind::Disk) ok = std::abs(center) + rho < 1.0;
    if (!ok)
        throw Error(ErrorKind::Contract, "bump support must lie inside the domain");
}

struct PolarGrid {
    std::vector<complexd> z;
    std::vector<double> w; // includes the r dr dtheta Jacobian
};

PolarGrid polar_grid(complexd center, double rho, int nr, int ntheta) {
    const GaussLegendreRule& rule = gauss_legendre(nr);
    PolarGrid g;
    g.z.reserve(size_t(nr) * ntheta);
    g.w.reserve(size_t(nr) * ntheta);
    const double dtheta = kTwoPi / ntheta;
    for (int i = 0; i < nr; ++i) {
        const double r = 0.5 * rho * (1.0 + rule.nodes[i]);
        const double wr = 0.5 * rho * rule.weights[i] * r * dtheta;
        for (int t = 0; t < ntheta; ++t) {
            const double th = dtheta * t;
            g.z.push_back(center + std::polar(r, th));
            g.w.push_back(wr);
        }
    }
    return g;
}

// circle through three points (preimage of the bump boundary)
void circumcircle(complexd p1, complexd p2, complexd p3, complexd& center, double& radius) {
    const double ax = p1.real(), ay = p1.imag();
    const double bx = p2.real(), by = p2.imag();
    const double cx = p3.real(), cy = p3.imag();
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if (std::fabs(d) < 1e-14)
        throw Error(ErrorKind::Contract, "bump preimage is not a bounded disk");
    const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                       (cx * cx + cy * cy) * (ay - by)) /
                      d;
    const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                       (cx * cx + cy * cy) * (bx - ax)) /
                      d;
    center = complexd(ux, uy);
    radius = std::abs(p1 - center);
}

void validate_mobius(const DomainSpec& domain_u, const DomainSpec& domain_v,
                     const greens::Mobius& f) {
    const greens::Mobius inv = f.inverse();
    // probe a handful of interior points both ways
    const complexd probes_v[] = {domain_v.kind == DomainSpec::Kind::Disk ? complexd(0.1, 0.2)
                                                                         : complexd(0.3, 0.7),
                                 domain_v.kind == DomainSpec::Kind::Disk ? complexd(-0.4, 0.1)
                                                                         : complexd(-0.2, 1.4)};
    for (const complexd& y : probes_v) {
        const complexd z = f(y);
        if (!greens::domain_contains(domain_u, z))
            throw Error(ErrorKind::Contract, "map does not send V into U");
        if (std::abs(inv(z) - y) > 1e-9)
            throw Error(ErrorKind::Contract, "map is not invertible");
    }
}

double variance_on_domain(const DomainSpec& domain,
                          const std::function<double(double, double)>& density, complexd center,
                          double rho, int order) {
    const int nr = order, ntheta = 2 * order;
    const PolarGrid grid = polar_grid(center, rho, nr, ntheta);
    const size_t n = grid.z.size();
    std::vector<double> dens(n);
    for (size_t i = 0; i < n; ++i) dens[i] = density(grid.z[i].real(), grid.z[i].imag());

    // smooth remainder, full tensor product
    double smooth = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : smooth) schedule(static)
#endif
    for (long long a = 0; a < (long long)n; ++a) {
        if (dens[a] == 0.0) continue;
        double row = 0.0;
        for (size_t b = 0; b < n; ++b) {
            if (dens[b] == 0.0) continue;
            row += grid.w[b] * dens[b] * smooth_greens_part(domain, grid.z[a], grid.z[b]);
        }
        smooth += grid.w[a] * dens[a] * row;
    }

    // Newtonian part: (1/2pi) int dens(z) P[dens](z)
    double logpart = 0.0;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : logpart) schedule(static)
#endif
    for (long long a = 0; a < (long long)n; ++a) {
        if (dens[a] == 0.0) continue;
        logpart += grid.w[a] * dens[a] *
                   bump_log_potential_polar(grid.z[a], center, rho, density, order);
    }
    return smooth + logpart / kTwoPi;
}

} // namespace

double bump_log_potential_polar(complexd z1, complexd bump_center, double rho,
                                const std::function<double(double, double)>& density, int order) {
    // int log(1/|z1 - z2|) density(z2) over the support disk, polar around z1
    const int ntheta = 2 * order;
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double dtheta = kTwoPi / ntheta;
    const complexd d = bump_center - z1;
    double total = 0.0;
    for (int t = 0; t < ntheta; ++t) {
        const double th = dtheta * t;
        const complexd u = std::polar(1.0, th);
        // exit radius of the ray z1 + s u from the support disk
        const double proj = d.real() * u.real() + d.imag() * u.imag();
        const double disc = proj * proj - std::norm(d) + rho * rho;
        if (disc <= 0.0) continue;
        const double exit = proj + std::sqrt(disc);
        if (exit <= 0.0) continue;
        // substitute s = exit * t^2 to flatten the log endpoint at s = 0
        double ray = 0.0;
        for (int i = 0; i < order; ++i) {
            const double t = 0.5 * (1.0 + rule.nodes[i]);
            const double s = exit * t * t;
            if (s <= 0.0) continue;
            const double w = 0.5 * rule.weights[i] * 2.0 * exit * t;
            const complexd z2 = z1 + s * u;
            ray += w * (-std::log(s)) * s * density(z2.real(), z2.imag());
        }
        total += ray * dtheta;
    }
    return total;
}

double radial_bump_log_potential(double s, double rho) {
    // free-space potential of (1 - r^2/rho^2)^3 against log(1/r)
    auto psi = [rho](double t) {
        const double u = 1.0 - t * t / (rho * rho);
        return u > 0.0 ? u * u * u : 0.0;
    };
    if (s >= rho) {
        const double mass = kTwoPi * integrate_adaptive([&](double t) { return psi(t) * t; }, 0.0,
                                                        rho, 16, 1e-14)
                                         .value;
        return -mass * std::log(s);
    }
    const double inner =
        integrate_adaptive([&](double t) { return psi(t) * t; }, 0.0, std::max(s, 1e-300), 16, 1e-14)
            .value;
    const double outer =
        integrate_adaptive([&](double t) { return psi(t) * t * std::log(t); }, s, rho, 16, 1e-14)
            .value;
    return -kTwoPi * (std::log(std::max(s, 1e-300)) * inner + outer);
}

VariancePair conformal_invariance_check(const DomainSpec& domain_u, const DomainSpec& domain_v,
                                        const greens::Mobius& map_v_to_u, complexd bump_center,
                                        double bump_radius, int order) {
    if (order < 8) throw Error(ErrorKind::Contract, "quadrature order too small");
    require_bump_inside(domain_u, bump_center, bump_radius);
    validate_mobius(domain_u, domain_v, map_v_to_u);

    const TestFunction omega = TestFunction::bump(bump_center, bump_radius);
    VariancePair out;
    out.var_u = variance_on_domain(domain_u, omega.f, bump_center, bump_radius, order);

    // the identity pullback is omega itself: evaluate the same integral
    const bool identity = map_v_to_u.b == complexd(0, 0) && map_v_to_u.c == complexd(0, 0) &&
                          map_v_to_u.a == map_v_to_u.d;
    if (identity && domain_u.kind == domain_v.kind) {
        out.var_v = variance_on_domain(domain_v, omega.f, bump_center, bump_radius, order);
        return out;
    }

    // pull the 2-form back to V: density |f'|^2 omega(f(y)) on the preimage disk
    const greens::Mobius inv = map_v_to_u.inverse();
    complexd pre_center;
    double pre_radius = 0.0;
    circumcircle(inv(bump_center + complexd(bump_radius, 0)),
                 inv(bump_center + complexd(-bump_radius, 0)),
                 inv(bump_center + complexd(0, bump_radius)), pre_center, pre_radius);
    require_bump_inside(domain_v, pre_center, pre_radius);
    auto pulled = [&](double x, double y) {
        const complexd w(x, y);
        const complexd z = map_v_to_u(w);
        const complexd dz = map_v_to_u.derivative(w);
        return omega.f(z.real(), z.imag()) * std::norm(dz);
    };
    out.var_v = variance_on_domain(domain_v, pulled, pre_center, pre_radius, order);
    return out;
}

} // namespace gff
} // namespace dimer
