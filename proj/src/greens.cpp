#include "dimer/greens.hpp"

#include <algorithm>
#include <cmath>

namespace dimer {
namespace greens {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

void require_distinct(complexd z1, complexd z2) {
    if (std::abs(z1 - z2) < 1e-13)
        throw Error(ErrorKind::Singularity, "evaluation points coincide");
}

void require_interior(const DomainSpec& domain, complexd z) {
    if (!domain_contains(domain, z))
        throw Error(ErrorKind::Domain, "point outside the domain interior");
}

// log|sin(t)| stable for large |Im t|
double log_abs_sin(complexd t) {
    const double y = t.imag();
    if (std::fabs(y) < 20.0) return std::log(std::abs(std::sin(t)));
    const double ay = std::fabs(y);
    // sin t = (e^{it} - e^{-it}) / (2i); the dominant factor is e^{|y|}/2
    const complexd small = std::exp(complexd(-2.0 * ay, 2.0 * (y > 0 ? t.real() : -t.real())));
    return ay - std::log(2.0) + std::log(std::abs(1.0 - small));
}
} // namespace

Mobius cayley_disk_to_halfplane() {
    // z -> i (1 - z) / (1 + z)
    return {{0, -1}, {0, 1}, {1, 0}, {1, 0}};
}

Mobius disk_automorphism(complexd a, double rot) {
    if (std::abs(a) >= 1.0)
        throw Error(ErrorKind::Contract, "disk automorphism parameter must lie inside the disk");
    const complexd phase = std::polar(1.0, rot);
    return {phase, -phase * a, -std::conj(a), {1, 0}};
}

bool domain_contains(const DomainSpec& domain, complexd z) {
    switch (domain.kind) {
        case DomainSpec::Kind::HalfPlane: return z.imag() > 0.0;
        case DomainSpec::Kind::Disk: return std::abs(z) < 1.0;
        case DomainSpec::Kind::Rectangle:
            return z.real() > 0.0 && z.real() < domain.rect_a && z.imag() > 0.0 &&
                   z.imag() < domain.rect_b;
    }
    return false;
}

static double g_halfplane(complexd z1, complexd z2) {
    return std::log(std::abs((z2 - z1) / (z2 - std::conj(z1)))) / kTwoPi;
}

double g_disk_closed(complexd z1, complexd z2) {
    return std::log(std::abs((z2 - z1) / (1.0 - std::conj(z1) * z2))) / kTwoPi;
}

static double g_rectangle_images(double a, double b, complexd z1, complexd z2) {
    // strip [0,a] x R resummed in closed form, then reflected across y = 0, b
    auto strip_term = [&](complexd w) { return log_abs_sin(kPi * w / (2.0 * a)); };
    auto block = [&](int n) {
        const complexd shift(0.0, 2.0 * b * n);
        return strip_term(z2 - z1 - shift) - strip_term(z2 + std::conj(z1) - shift) -
               strip_term(z2 - std::conj(z1) - shift) + strip_term(z2 + z1 - shift);
    };
    double sum = block(0);
    for (int n = 1; n <= 256; ++n) {
        const double add = block(n) + block(-n);
        sum += add;
        if (n >= 2 && std::fabs(add) < 1e-14) break;
    }
    return sum / kTwoPi;
}

double g_dirichlet(const DomainSpec& domain, complexd z1, complexd z2) {
    require_distinct(z1, z2);
    require_interior(domain, z1);
    require_interior(domain, z2);
    switch (domain.kind) {
        case DomainSpec::Kind::HalfPlane: return g_halfplane(z1, z2);
        case DomainSpec::Kind::Disk: {
            const Mobius phi = cayley_disk_to_halfplane();
            return g_halfplane(phi(z1), phi(z2));
        }
        case DomainSpec::Kind::Rectangle:
            return g_rectangle_images(domain.rect_a, domain.rect_b, z1, z2);
    }
    throw Error(ErrorKind::Internal, "unreachable");
}

static void require_rectangle(const DomainSpec& domain) {
    if (domain.kind != DomainSpec::Kind::Rectangle)
        throw Error(ErrorKind::Contract, "operation needs a rectangle domain");
}

double eigenfunction(const DomainSpec& rect, int j, int k, double x, double y) {
    require_rectangle(rect);
    const double a = rect.rect_a, b = rect.rect_b;
    return 2.0 / std::sqrt(a * b) * std::sin(kPi * j * x / a) * std::sin(kPi * k * y / b);
}

double eigenvalue(const DomainSpec& rect, int j, int k) {
    require_rectangle(rect);
    const double a = rect.rect_a, b = rect.rect_b;
    return -kPi * kPi * (double(j) * j / (a * a) + double(k) * k / (b * b));
}

std::vector<EigenMode> eigenmodes(const DomainSpec& rect, int count) {
    require_rectangle(rect);
    if (count < 1) throw Error(ErrorKind::Contract, "mode count must be positive");
    // enough per-axis range to cover the requested count after sorting
    int reach = 2;
    while (reach * reach < 4 * count) ++reach;
    std::vector<EigenMode> modes;
    modes.reserve(size_t(reach) * reach);
    for (int j = 1; j <= reach; ++j)
        for (int k = 1; k <= reach; ++k) modes.push_back({j, k, eigenvalue(rect, j, k)});
    std::sort(modes.begin(), modes.end(), [](const EigenMode& l, const EigenMode& r) {
        if (l.eigenvalue != r.eigenvalue) return l.eigenvalue > r.eigenvalue; // smaller |lambda| first
        if (l.j != r.j) return l.j < r.j;
        return l.k < r.k;
    });
    modes.resize(count);
    return modes;
}

double spectral_gd_check(const DomainSpec& rect, complexd z1, complexd z2, int per_axis_cutoff) {
    require_rectangle(rect);
    require_distinct(z1, z2);
    const double a = rect.rect_a, b = rect.rect_b;
    double sum = 0.0;
    for (int j = 1; j <= per_axis_cutoff; ++j) {
        const double sj1 = std::sin(kPi * j * z1.real() / a), sj2 = std::sin(kPi * j * z2.real() / a);
        if (sj1 == 0.0 && sj2 == 0.0) continue;
        double inner = 0.0;
        for (int k = 1; k <= per_axis_cutoff; ++k) {
            const double lambda = -kPi * kPi * (double(j) * j / (a * a) + double(k) * k / (b * b));
            inner += std::sin(kPi * k * z1.imag() / b) * std::sin(kPi * k * z2.imag() / b) / lambda;
        }
        sum += sj1 * sj2 * inner;
    }
    return 4.0 / (a * b) * sum;
}

namespace {

// continuous argument of f along the straight segment from w0 to w1,
// starting from arg0 at w0
double continue_arg(const std::function<complexd(complexd)>& f, complexd w0, complexd w1,
                    double arg0, int depth = 0) {
    const complexd f0 = f(w0), f1 = f(w1);
    const complexd ratio = f1 / f0;
    if (std::abs(ratio - 1.0) < 0.5 || depth > 40) return arg0 + std::arg(ratio);
    const complexd mid = 0.5 * (w0 + w1);
    const double argm = continue_arg(f, w0, mid, arg0, depth + 1);
    return continue_arg(f, mid, w1, argm, depth + 1);
}

NeumannDiff neumann_diff_halfplane(complexd z1, complexd z1p, complexd z2) {
    if (std::abs(z2 - z1) < 1e-13 || std::abs(z2 - z1p) < 1e-13)
        throw Error(ErrorKind::Singularity, "z2 coincides with a source point");
    if (std::abs(z1 - z1p) < 1e-15) return {complexd(0.0, 0.0), 0};
    auto f = [&](complexd w) {
        return (w - z1) * (w - std::conj(z1)) / ((w - z1p) * (w - std::conj(z1p)));
    };
    const complexd fz = f(z2);
    const double principal = std::arg(fz);
    double arg_cont = principal;
    if (z2.imag() != 0.0) {
        const complexd anchor(z2.real(), 0.0);
        // f is real and positive on the boundary, so the anchor argument is 0
        arg_cont = continue_arg(f, anchor, z2, 0.0);
    }
    NeumannDiff out;
    out.value = complexd(std::log(std::abs(fz)), arg_cont) / kTwoPi;
    out.winding = int(std::lround((arg_cont - principal) / kTwoPi));
    return out;
}

} // namespace

NeumannDiff neumann_diff(const DomainSpec& domain, complexd z1, complexd z1p, complexd z2) {
    switch (domain.kind) {
        case DomainSpec::Kind::HalfPlane: return neumann_diff_halfplane(z1, z1p, z2);
        case DomainSpec::Kind::Disk: {
            const Mobius phi = cayley_disk_to_halfplane();
            return neumann_diff_halfplane(phi(z1), phi(z1p), phi(z2));
        }
        default:
            throw Error(ErrorKind::UnsupportedRegion,
                        "analytic Neumann difference: half-plane and disk only");
    }
}

FKernelValue f_kernels(const DomainSpec& domain, complexd z1, complexd z2) {
    require_distinct(z1, z2);
    switch (domain.kind) {
        case DomainSpec::Kind::HalfPlane: {
            require_interior(domain, z1);
            FKernelValue v;
            v.fplus = 2.0 / (kPi * (z2 - z1));
            v.fminus = 2.0 / (kPi * (z2 - std::conj(z1)));
            return v;
        }
        case DomainSpec::Kind::Disk: {
            require_interior(domain, z1);
            require_interior(domain, z2);
            const Mobius phi = cayley_disk_to_halfplane();
            const complexd w1 = phi(z1), w2 = phi(z2);
            const complexd d1 = phi.derivative(z1);
            FKernelValue v;
            v.fplus = 2.0 / (kPi * (w2 - w1)) * d1;
            v.fminus = 2.0 / (kPi * (w2 - std::conj(w1))) * std::conj(d1);
            return v;
        }
        default:
            throw Error(ErrorKind::UnsupportedRegion, "F kernels: half-plane and disk only");
    }
}

} // namespace greens
} // namespace dimer
