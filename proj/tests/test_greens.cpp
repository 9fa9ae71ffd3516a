#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimer/greens.hpp"
#include "dimer/quadrature.hpp"
#include "dimer/rng.hpp"

using namespace dimer;
using namespace dimer::greens;
using lattice::DomainSpec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const DomainSpec kHalf = DomainSpec::half_plane();
const DomainSpec kDisk = DomainSpec::unit_disk();
const DomainSpec kSquare = DomainSpec::rectangle(1.0, 1.0);
} // namespace

TEST_CASE("half-plane Green's function closed form") {
    const double v = g_dirichlet(kHalf, complexd(0, 1), complexd(0, 2));
    CHECK(v == doctest::Approx(std::log(1.0 / 3.0) / (2 * kPi)).epsilon(1e-12));
    CHECK(v == doctest::Approx(-0.1748489).epsilon(1e-5));
}

TEST_CASE("Green's functions are symmetric and vanish at the boundary") {
    RngStream rng(5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const complexd z1(2 * rng.next_double() - 1, 0.2 + rng.next_double());
        const complexd z2(2 * rng.next_double() - 1, 0.2 + rng.next_double());
        if (std::abs(z1 - z2) < 0.05) continue;
        CHECK(g_dirichlet(kHalf, z1, z2) ==
              doctest::Approx(g_dirichlet(kHalf, z2, z1)).epsilon(1e-10));
        const complexd d1 = 0.8 * z1 / std::abs(z1) * 0.9, d2 = 0.5 * z2 / std::abs(z2);
        if (std::abs(d1 - d2) > 0.05)
            CHECK(g_dirichlet(kDisk, d1, d2) ==
                  doctest::Approx(g_dirichlet(kDisk, d2, d1)).epsilon(1e-10));
        const complexd r1(0.2 + 0.6 * rng.next_double(), 0.2 + 0.6 * rng.next_double());
        const complexd r2(0.2 + 0.6 * rng.next_double(), 0.2 + 0.6 * rng.next_double());
        if (std::abs(r1 - r2) > 0.05)
            CHECK(g_dirichlet(kSquare, r1, r2) ==
                  doctest::Approx(g_dirichlet(kSquare, r2, r1)).epsilon(1e-10));
    }
    // boundary decay
    CHECK(std::fabs(g_dirichlet(kHalf, complexd(0, 1), complexd(0.5, 1e-7))) < 1e-6);
    CHECK(std::fabs(g_dirichlet(kSquare, complexd(0.3, 0.4), complexd(0.7, 1e-7))) < 1e-6);
}

TEST_CASE("coincident or exterior points are rejected") {
    CHECK_THROWS_AS(g_dirichlet(kHalf, complexd(0, 1), complexd(0, 1)), Error);
    CHECK_THROWS_AS(g_dirichlet(kHalf, complexd(0, 1), complexd(0, -1)), Error);
    CHECK_THROWS_AS(g_dirichlet(kDisk, complexd(0.2, 0), complexd(1.5, 0)), Error);
}

TEST_CASE("disk pullback agrees with the closed form and is Mobius independent") {
    RngStream rng(6, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const complexd z1 = 0.9 * complexd(2 * rng.next_double() - 1, 2 * rng.next_double() - 1);
        const complexd z2 = 0.9 * complexd(2 * rng.next_double() - 1, 2 * rng.next_double() - 1);
        if (std::abs(z1) >= 0.95 || std::abs(z2) >= 0.95 || std::abs(z1 - z2) < 0.05) continue;
        const double direct = g_dirichlet(kDisk, z1, z2);
        CHECK(direct == doctest::Approx(g_disk_closed(z1, z2)).epsilon(1e-10));
        // a second Mobius route: compose the Cayley map with w -> 2w + 1
        const Mobius phi = cayley_disk_to_halfplane();
        const Mobius post{complexd(2, 0), complexd(1, 0), complexd(0, 0), complexd(1, 0)};
        const Mobius other = post.compose(phi);
        const double via_other =
            g_dirichlet(kHalf, other(z1), other(z2));
        CHECK(direct == doctest::Approx(via_other).epsilon(1e-10));
    }
}

TEST_CASE("rectangle images agree with the spectral sum at a symmetric pair") {
    const complexd z1(0.3, 0.4), z2(0.7, 0.6);
    const double oracle = g_dirichlet(kSquare, z1, z2);
    const double partial = spectral_gd_check(kSquare, z1, z2, 200);
    CHECK(std::fabs(partial - oracle) < 1e-6);
}

TEST_CASE("spectral truncation error shrinks with the cutoff") {
    const complexd z1(0.25, 0.5), z2(0.75, 0.5);
    const double oracle = g_dirichlet(kSquare, z1, z2);
    const double e50 = std::fabs(spectral_gd_check(kSquare, z1, z2, 50) - oracle);
    const double e100 = std::fabs(spectral_gd_check(kSquare, z1, z2, 100) - oracle);
    const double e400 = std::fabs(spectral_gd_check(kSquare, z1, z2, 400) - oracle);
    CHECK(e100 < e50);
    CHECK(e400 < e100);
}

TEST_CASE("eigen coefficient identity of the Dirichlet Green.s function") {
    // <f_1, g_D(z1, .)> = f_1(z1) / lambda_1 by 2D quadrature with the
    // log singularity handled in polar coordinates around z1
    const complexd z1(0.35, 0.55);
    auto f11 = [](double x, double y) { return 2.0 * std::sin(kPi * x) * std::sin(kPi * y); };
    // smooth remainder part: g + log-part (integrand bounded)
    const int n = 80;
    const GaussLegendreRule& rule = gauss_legendre(n);
    double smooth = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = 0.5 * (1 + rule.nodes[i]);
        for (int j = 0; j < n; ++j) {
            const double y = 0.5 * (1 + rule.nodes[j]);
            const complexd z2(x, y);
            const double dist = std::abs(z2 - z1);
            if (dist < 1e-9) continue;
            const double reg = g_dirichlet(kSquare, z1, z2) - std::log(dist) / (2 * kPi);
            smooth += 0.25 * rule.weights[i] * rule.weights[j] * reg * f11(x, y);
        }
    }
    // log part in polar coordinates: rays from z1 to the square boundary
    const int ntheta = 720, nr = 60;
    double logpart = 0.0;
    for (int t = 0; t < ntheta; ++t) {
        const double th = 2 * kPi * (t + 0.5) / ntheta;
        const double cx = std::cos(th), sx = std::sin(th);
        double exit = 1e9;
        if (cx > 0) exit = std::min(exit, (1.0 - z1.real()) / cx);
        if (cx < 0) exit = std::min(exit, (0.0 - z1.real()) / cx);
        if (sx > 0) exit = std::min(exit, (1.0 - z1.imag()) / sx);
        if (sx < 0) exit = std::min(exit, (0.0 - z1.imag()) / sx);
        for (int i = 0; i < nr; ++i) {
            const double r = 0.5 * exit * (1 + gauss_legendre(nr).nodes[i]);
            const double w = 0.5 * exit * gauss_legendre(nr).weights[i];
            logpart += w * std::log(r) * r * f11(z1.real() + r * cx, z1.imag() + r * sx);
        }
    }
    logpart *= (2 * kPi / ntheta) / (2 * kPi);
    const double inner = smooth + logpart;
    const double expected = f11(z1.real(), z1.imag()) / (-2.0 * kPi * kPi);
    CHECK(std::fabs(inner - expected) < 1e-6);
}

TEST_CASE("near-diagonal behaviour keeps only the log singularity") {
    const complexd z1(0.4, 0.6);
    for (double d : {1e-2, 1e-4, 1e-6}) {
        const complexd z2 = z1 + complexd(d, 0.7 * d);
        const double reg =
            g_dirichlet(kSquare, z1, z2) - std::log(std::abs(z2 - z1)) / (2 * kPi);
        CHECK(std::fabs(reg) < 1.0);
    }
}

TEST_CASE("analytic Neumann difference: boundary behaviour and degeneracies") {
    const complexd z1(0.4, 1.2), z1p(-0.8, 0.6);
    // imaginary part vanishes for real z2
    const auto on_axis = neumann_diff(kHalf, z1, z1p, complexd(2.5, 0.0));
    CHECK(std::fabs(on_axis.value.imag()) < 1e-12);
    // z1 == z1p gives identically zero
    const auto zero = neumann_diff(kHalf, z1, z1, complexd(0.3, 0.9));
    CHECK(std::abs(zero.value) == 0.0);
    CHECK_THROWS_AS(neumann_diff(kHalf, z1, z1p, z1), Error);
}

TEST_CASE("real part of the Neumann difference has zero normal derivative") {
    const complexd z1(0.4, 1.2), z1p(-0.8, 0.6);
    const double x = 0.7, h = 1e-4;
    auto re_at = [&](double y) { return neumann_diff(kHalf, z1, z1p, complexd(x, y)).value.real(); };
    // one-sided second-order difference at the boundary
    const double dn = (-3.0 * re_at(1e-12) + 4.0 * re_at(h) - re_at(2 * h)) / (2.0 * h);
    CHECK(std::fabs(dn) < 1e-6);
}

TEST_CASE("winding count increments when continuing around a source") {
    const complexd z1(0.0, 1.0), z1p(3.0, 2.0);
    // continue along a path that loops once around z1 and compare arguments
    auto f = [&](complexd w) {
        return (w - z1) * (w - std::conj(z1)) / ((w - z1p) * (w - std::conj(z1p)));
    };
    const complexd start(0.0, 0.2);
    double arg = std::arg(f(start));
    complexd prev = start;
    const int steps = 400;
    for (int s = 1; s <= steps; ++s) {
        const double t = double(s) / steps;
        // circle of radius 0.8 around z1, closing back at the start point
        const complexd w = z1 + std::polar(0.8, -kPi / 2 + 2 * kPi * t);
        arg += std::arg(f(w) / f(prev));
        prev = w;
    }
    CHECK(arg - std::arg(f(start)) == doctest::Approx(2 * kPi).epsilon(1e-9));
}

TEST_CASE("F kernels match the half-plane closed forms") {
    const auto v = f_kernels(kHalf, complexd(0, 1), complexd(0, 2));
    CHECK(v.fplus.real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v.fplus.imag() == doctest::Approx(-2.0 / kPi).epsilon(1e-12));
    CHECK(v.fminus.imag() == doctest::Approx(-2.0 / (3.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("F kernels vanish towards the basepoint") {
    const complexd z1(0.3, 0.8);
    double prev = 1e9;
    for (double t : {5.0, 20.0, 200.0}) {
        const auto v = f_kernels(kHalf, z1, complexd(0.0, t));
        const double mag = std::abs(v.fplus) + std::abs(v.fminus);
        CHECK(mag < prev);
        prev = mag;
    }
    CHECK(prev < 1e-2);
    // disk basepoint -1
    double dprev = 1e9;
    for (double t : {0.9, 0.99, 0.999}) {
        const auto v = f_kernels(kDisk, complexd(0.2, 0.1), complexd(-t, 0.0));
        const double mag = std::abs(v.fplus) + std::abs(v.fminus);
        CHECK(mag < dprev);
        dprev = mag;
    }
}

TEST_CASE("finite differences of the Neumann difference reproduce the kernels") {
    const complexd z1p(-1.3, 0.4); // fixed companion source
    RngStream rng(8, 8);
    for (int trial = 0; trial < 5; ++trial) {
        const complexd z1(2 * rng.next_double() - 1, 0.5 + rng.next_double());
        const complexd z2(2 * rng.next_double() - 1, 0.5 + rng.next_double());
        if (std::abs(z1 - z2) < 0.3 || std::abs(z1 - z1p) < 0.3) continue;
        const double delta = 1e-5;
        auto g = [&](complexd w1) { return neumann_diff(kHalf, w1, z1p, z2).value; };
        const complexd f0 = (g(z1 + delta) - g(z1 - delta)) / (2.0 * delta);
        const complexd if1 = (g(z1 + complexd(0, delta)) - g(z1 - complexd(0, delta))) / (2.0 * delta);
        const auto v = f_kernels(kHalf, z1, z2);
        // -4 dg~ = F+ dz + F- dconj(z): real step gives F0, imaginary step i F1
        const complexd fplus = -2.0 * (f0 + if1 / complexd(0, 1));
        const complexd fminus = -2.0 * (f0 - if1 / complexd(0, 1));
        CHECK(std::abs(fplus - v.fplus) / std::abs(v.fplus) < 1e-4);
        CHECK(std::abs(fminus - v.fminus) / std::abs(v.fminus) < 1e-4);
    }
}

TEST_CASE("F0 and F1 are single-valued around a loop") {
    const complexd z1(0.2, 1.1);
    auto f0f1 = [&](complexd z2) {
        const auto v = f_kernels(kHalf, z1, z2);
        return std::make_pair(-0.25 * (v.fplus + v.fminus), -0.25 * (v.fplus - v.fminus));
    };
    const complexd start = z1 + complexd(0.5, 0.0);
    auto base = f0f1(start);
    auto cur = base;
    const int steps = 128;
    for (int s = 1; s <= steps; ++s) {
        const complexd z2 = z1 + std::polar(0.5, 2 * kPi * s / steps);
        cur = f0f1(z2);
    }
    CHECK(std::abs(cur.first - base.first) < 1e-8);
    CHECK(std::abs(cur.second - base.second) < 1e-8);
}

TEST_CASE("eigenmodes are orthonormal under quadrature") {
    const auto modes = eigenmodes(kSquare, 6);
    const int n = 64;
    const GaussLegendreRule& rule = gauss_legendre(n);
    for (size_t a = 0; a < modes.size(); ++a) {
        for (size_t b = a; b < modes.size(); ++b) {
            double ip = 0.0;
            for (int i = 0; i < n; ++i) {
                const double x = 0.5 * (1 + rule.nodes[i]);
                for (int j = 0; j < n; ++j) {
                    const double y = 0.5 * (1 + rule.nodes[j]);
                    ip += 0.25 * rule.weights[i] * rule.weights[j] *
                          eigenfunction(kSquare, modes[a].j, modes[a].k, x, y) *
                          eigenfunction(kSquare, modes[b].j, modes[b].k, x, y);
                }
            }
            CHECK(std::fabs(ip - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
    }
    // mode ordering: first mode of the unit square is (1,1) with -2 pi^2
    CHECK(modes[0].j == 1);
    CHECK(modes[0].k == 1);
    CHECK(modes[0].eigenvalue == doctest::Approx(-2 * kPi * kPi));
}
