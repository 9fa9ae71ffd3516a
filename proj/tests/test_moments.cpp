#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dimer/moments.hpp"
#include "dimer/rng.hpp"

using namespace dimer;
using namespace dimer::moments;
using lattice::DomainSpec;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("pairing determinant closed forms for small k") {
    const complexd x1(0.3, 0.1), x2(1.2, -0.4);
    const complexd det2 = pairing_det({x1, x2});
    const complexd expected = 1.0 / ((x2 - x1) * (x2 - x1));
    CHECK(std::abs(det2 - expected) < 1e-14);
    // odd k vanishes identically
    CHECK(std::abs(pairing_det({x1, x2, complexd(2.0, 0.7)})) == 0.0);
}

TEST_CASE("pairing counts are the double factorials") {
    CHECK(enumerate_pairings(2).size() == 1);
    CHECK(enumerate_pairings(4).size() == 3);
    CHECK(enumerate_pairings(6).size() == 15);
    CHECK(enumerate_pairings(8).size() == 105);
}

TEST_CASE("hand-evaluated pairing sum at x = (0,1,2,3)") {
    const complexd v = pairing_sum({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    CHECK(v.real() == doctest::Approx(1.0 + 1.0 / 16.0 + 1.0 / 9.0).epsilon(1e-14));
    CHECK(std::fabs(v.imag()) < 1e-15);
}

TEST_CASE("pairing determinant equals the pairing sum") {
    for (int k : {2, 4, 6, 8}) {
        RngStream rng(123, k);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<complexd> xs;
            while (int(xs.size()) < k) {
                const complexd z(2 * rng.next_double() - 1, 2 * rng.next_double() - 1);
                bool ok = true;
                for (const complexd& w : xs)
                    if (std::abs(z - w) < 0.2) ok = false;
                if (ok) xs.push_back(z);
            }
            const complexd a = pairing_det(xs), b = pairing_sum(xs);
            CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
        }
    }
}

TEST_CASE("pairing homogeneity: scaling points scales the determinant by t^-k") {
    RngStream rng(9, 9);
    std::vector<complexd> xs;
    for (int i = 0; i < 6; ++i)
        xs.push_back(complexd(3 * rng.next_double() - 1.5, 3 * rng.next_double() - 1.5));
    const complexd base = pairing_det(xs);
    const double t = 1.7;
    std::vector<complexd> scaled;
    for (const complexd& x : xs) scaled.push_back(t * x);
    const complexd after = pairing_det(scaled);
    CHECK(std::abs(after - base / std::pow(t, 6)) < 1e-9 * std::abs(base));
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(pairing_det({{1, 1}, {1, 1}}), Error);
    CHECK_THROWS_AS(pairing_sum({{1, 1}, {2, 0}, {3, 0}}), Error); // odd k -> arity
    CHECK_THROWS_AS(two_point_closed(complexd(0, 1), complexd(0, 1)), Error);
}

TEST_CASE("two-point closed form at the imaginary-axis pair and symmetry") {
    const double v = two_point_closed(complexd(0, 1), complexd(0, 2));
    CHECK(v == doctest::Approx(8.0 / (kPi * kPi) * std::log(3.0)).epsilon(1e-14));
    CHECK(v == doctest::Approx(0.890502).epsilon(1e-5));
    CHECK(two_point_closed(complexd(0.4, 0.7), complexd(-0.3, 1.1)) ==
          doctest::Approx(two_point_closed(complexd(-0.3, 1.1), complexd(0.4, 0.7)))
              .epsilon(1e-14));
}

TEST_CASE("closed form is -(16/pi) times the Green's function") {
    RngStream rng(77, 1);
    const auto half = DomainSpec::half_plane();
    for (int trial = 0; trial < 100; ++trial) {
        const complexd p(2 * rng.next_double() - 1, 0.2 + rng.next_double());
        const complexd q(2 * rng.next_double() - 1, 0.2 + rng.next_double());
        if (std::abs(p - q) < 0.05) continue;
        CHECK(std::fabs(two_point_closed(p, q) + 16.0 / kPi * greens::g_dirichlet(half, p, q)) <
              1e-12);
    }
}

TEST_CASE("quadrature over explicit offset polylines hits the closed form") {
    const complexd p(0, 1), q(0, 2);
    IntegrationPath g1, g2;
    g1.points = {complexd(-0.15, 0.0), complexd(-0.15, 1.0), p};
    g2.points = {complexd(0.15, 0.0), complexd(0.15, 2.0), q};
    const auto res = two_point_quadrature(p, q, g1, g2);
    CHECK(std::fabs(res.value - two_point_closed(p, q)) < 1e-6);
    CHECK(res.error_estimate < 1e-6);
}

TEST_CASE("default path families are disjoint with recorded separation") {
    const auto family = default_paths_halfplane({complexd(0, 1), complexd(0, 2), complexd(1, 1)});
    CHECK(family.paths.size() == 3);
    CHECK(family.min_separation > 0.0);
    for (size_t i = 0; i < family.paths.size(); ++i)
        for (size_t j = i + 1; j < family.paths.size(); ++j)
            CHECK(path_distance(family.paths[i], family.paths[j]) >= family.min_separation - 1e-12);
}

TEST_CASE("path deformation invariance of the two-point quadrature") {
    const complexd p(-0.4, 0.9), q(0.7, 1.4);
    const auto family = default_paths_halfplane({p, q});
    const auto a = two_point_quadrature(p, q, family.paths[0], family.paths[1]);
    IntegrationPath g1, g2;
    g1.points = {complexd(-1.5, 0.0), complexd(-1.5, 0.9), p}; // different route
    g2.points = {complexd(2.0, 0.0), complexd(2.0, 1.4), q};
    const auto b = two_point_quadrature(p, q, g1, g2);
    CHECK(std::fabs(a.value - b.value) <= 2.0 * (a.error_estimate + b.error_estimate) + 1e-8);
}

TEST_CASE("crossing paths raise a disjointness error") {
    const complexd p(0, 1), q(0, 2);
    IntegrationPath g1, g2;
    g1.points = {complexd(-1.0, 0.0), p};
    g2.points = {complexd(1.0, 0.0), complexd(-1.0, 1.5), q}; // sweeps across g1
    CHECK_THROWS_AS(two_point_quadrature(p, q, g1, g2), Error);
}

TEST_CASE("endpoint mismatches raise contract errors") {
    const complexd p(0, 1), q(0, 2);
    const auto family = default_paths_halfplane({p, q});
    CHECK_THROWS_AS(two_point_quadrature(q, p, family.paths[0], family.paths[1]), Error);
}

TEST_CASE("k-point moments: parity, symmetry, closed-form agreement") {
    const auto half = DomainSpec::half_plane();
    const std::vector<complexd> triple = {{0, 1}, {1, 1}, {0, 2}};
    CHECK(k_point_moment(half, triple).value == 0.0);

    const complexd p(0, 1), q(0, 2);
    const auto two = k_point_moment(half, {p, q});
    CHECK(std::fabs(two.value - two_point_closed(p, q)) < 1e-12);

    const std::vector<complexd> quad = {{0, 1}, {0, 2}, {1, 1}, {-1, 2}};
    const auto m1 = k_point_moment(half, quad);
    const std::vector<complexd> permuted = {{1, 1}, {0, 2}, {-1, 2}, {0, 1}};
    CHECK(k_point_moment(half, permuted).value == doctest::Approx(m1.value).epsilon(1e-13));
    // explicit pairing expansion
    const auto g = [&](complexd a, complexd b) { return greens::g_dirichlet(half, a, b); };
    const double expected = std::pow(16.0 / kPi, 2) *
                            (g(quad[0], quad[1]) * g(quad[2], quad[3]) +
                             g(quad[0], quad[2]) * g(quad[1], quad[3]) +
                             g(quad[0], quad[3]) * g(quad[1], quad[2]));
    CHECK(m1.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(k_point_moment(half, {p, p}), Error);
}

TEST_CASE("sign-vector quadrature oracle matches the pairing formula (k=2)") {
    const complexd p(0.2, 0.8), q(-0.5, 1.3);
    const auto family = default_paths_halfplane({p, q});
    const auto quad = sign_sum_moment_quadrature({p, q}, family, 1e-6);
    CHECK(std::fabs(quad.value - two_point_closed(p, q)) < 1e-5);
}
