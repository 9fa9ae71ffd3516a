#include "dimer/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "dimer/batch.hpp"
#include "dimer/bigint.hpp"
#include "dimer/board.hpp"
#include "dimer/gff.hpp"
#include "dimer/greens.hpp"
#include "dimer/height.hpp"
#include "dimer/kasteleyn.hpp"
#include "dimer/lattice.hpp"
#include "dimer/moments.hpp"
#include "dimer/sampler.hpp"
#include "dimer/stats.hpp"

namespace dimer {
namespace checks {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

lattice::TemperleyanRegion square_region(int n) {
    return lattice::approximate_domain(lattice::DomainSpec::rectangle(1.0, 1.0, {0.0, 0.0}),
                                       1.0 / n);
}

lattice::TemperleyanRegion rect_minus_corner(int m, int n) {
    return lattice::make_temperleyan(lattice::build_even_rectangle(m, n, 1.0), {0, 0});
}

// random connected, simply-connected cell set of the requested size
std::vector<Cell> random_small_region(RngStream& rng, int size) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Cell> cells = {{0, 0}};
        std::set<Cell> cell_set = {{0, 0}};
        int guard = 0;
        while (int(cells.size()) < size && ++guard < 4000) {
            const Cell base = cells[rng.next_below(cells.size())];
            const int dir = int(rng.next_below(4));
            const Cell next{base.x + (dir == 0) - (dir == 1), base.y + (dir == 2) - (dir == 3)};
            if (cell_set.insert(next).second) cells.push_back(next);
        }
        if (int(cells.size()) != size) continue;
        if (Board(cells).simply_connected()) return cells;
    }
    throw Error(ErrorKind::Internal, "failed to draw a random region");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1

CheckResult check_exact_counting(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 1;
    r.name = "exact counting vs enumeration and product formula";
    r.tolerance = 0.0;
    int mismatches = 0;
    RngStream rng(options.seed, 101);
    std::ostringstream detail;
    const int n_regions = 20;
    for (int i = 0; i < n_regions; ++i) {
        const int size = 2 + int(rng.next_below(15)); // 2..16 cells
        const Board board(random_small_region(rng, size));
        const BigInt det_count = enumerate::count_tilings(board);
        const auto all = enumerate::enumerate_tilings(board);
        if (!(det_count == BigInt(int64_t(all.size())))) ++mismatches;
    }
    // 8x8 rectangle against the cosine double product
    std::vector<Cell> cells;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) cells.push_back({i, j});
    const BigInt count8 = enumerate::count_tilings(Board(cells));
    long double prod = 1.0L;
    for (int j = 1; j <= 4; ++j) {
        for (int k = 1; k <= 4; ++k) {
            const long double cj = std::cos((long double)(kPi) * j / 9.0L);
            const long double ck = std::cos((long double)(kPi) * k / 9.0L);
            prod *= 4.0L * cj * cj + 4.0L * ck * ck;
        }
    }
    const long long oracle = (long long)(std::llroundl(prod));
    const bool count8_ok = count8 == BigInt(oracle) && oracle == 12988816LL;
    r.measured = double(mismatches) + (count8_ok ? 0.0 : 1.0);
    r.target = 0.0;
    r.passed = mismatches == 0 && count8_ok;
    detail << n_regions << " random regions (<=16 cells) matched enumeration with " << mismatches
           << " mismatches; 8x8 count " << count8.to_string() << " vs product formula " << oracle;
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------- criterion 2

CheckResult check_sampler_uniformity(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 2;
    r.name = "sampler uniformity and cross-agreement (3x3 minus corner)";
    const int samples = options.small_budget ? 4000 : 20000;
    r.tolerance = 0.001; // p-value floor
    const auto region = rect_minus_corner(3, 3);
    const Board board = Board::from_region(region);
    const auto tilings = enumerate::enumerate_tilings(board);
    std::map<std::string, int> index;
    for (size_t i = 0; i < tilings.size(); ++i) index[tilings[i].key()] = int(i);
    std::vector<int64_t> counts_k(tilings.size(), 0), counts_w(tilings.size(), 0);

    const sampler::KasteleynSampler ksampler(board);
    const sampler::EvenGrid grid = sampler::EvenGrid::from_region(region);
    for (int s = 0; s < samples; ++s) {
        RngStream rng_k(options.seed, 2000000ULL + s);
        const auto it = index.find(ksampler.sample(rng_k).key());
        if (it == index.end()) throw Error(ErrorKind::Internal, "sampler produced unknown tiling");
        ++counts_k[it->second];
        RngStream rng_w(options.seed, 3000000ULL + s);
        const auto tree = sampler::wilson_spanning_tree(grid, rng_w);
        const auto jt = index.find(sampler::temperley_tree_to_tiling(tree).key());
        if (jt == index.end()) throw Error(ErrorKind::Internal, "bijection produced unknown tiling");
        ++counts_w[jt->second];
    }
    const ChiSquareTest uk = chi_square_uniform(counts_k);
    const ChiSquareTest uw = chi_square_uniform(counts_w);
    const ChiSquareTest both = chi_square_two_sample(counts_k, counts_w);
    r.measured = std::min({uk.p_value, uw.p_value, both.p_value});
    r.target = 1.0;
    r.passed = uk.p_value > 0.001 && uw.p_value > 0.001 && both.p_value > 0.001;
    std::ostringstream detail;
    detail << tilings.size() << " tilings, " << samples << " samples each; p(kasteleyn)="
           << format_double(uk.p_value) << " p(wilson)=" << format_double(uw.p_value)
           << " p(two-sample)=" << format_double(both.p_value);
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------- criterion 3

CheckResult check_height_validity(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 3;
    r.name = "height face and boundary rules hold exactly on sampled tilings";
    r.tolerance = 0.0;
    const double scale = options.small_budget ? 0.1 : 1.0;
    struct Item {
        lattice::TemperleyanRegion region;
        batch::Algorithm algo;
        int samples;
    };
    std::vector<Item> corpus;
    corpus.push_back({rect_minus_corner(21, 21), batch::Algorithm::Wilson, int(4000 * scale)});
    corpus.push_back({rect_minus_corner(9, 9), batch::Algorithm::Wilson, int(2500 * scale)});
    corpus.push_back({rect_minus_corner(5, 5), batch::Algorithm::Wilson, int(1500 * scale)});
    corpus.push_back({rect_minus_corner(3, 3), batch::Algorithm::Wilson, int(1000 * scale)});
    corpus.push_back({lattice::approximate_domain(lattice::DomainSpec::unit_disk(), 1.0 / 8.0),
                      batch::Algorithm::Kasteleyn, int(400 * scale)});
    corpus.push_back({lattice::make_temperleyan(lattice::build_even_rectangle(7, 5, 1.0), {4, 0}),
                      batch::Algorithm::Kasteleyn, int(600 * scale)});
    long long failures = 0;
    long long total = 0;
    for (const Item& item : corpus) {
        batch::DimerBatchConfig config;
        config.algo = item.algo;
        config.samples = std::max(item.samples, 10);
        config.seed = options.seed + item.samples;
        config.check_rules = true;
        const auto result = batch::run_dimer_batch(item.region, config);
        failures += result.face_rule_failures + result.boundary_rule_failures;
        total += config.samples;
    }
    r.measured = double(failures);
    r.target = 0.0;
    r.passed = failures == 0;
    r.detail = std::to_string(total) + " sampled tilings across 6 regions, " +
               std::to_string(failures) + " rule violations";
    r.seconds = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------- criterion 4

CheckResult check_pairing_identity(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 4;
    r.name = "pairing determinant equals the pairing sum";
    r.tolerance = 1e-9;
    double worst = 0.0;
    for (int k : {2, 4, 6, 8}) {
        RngStream rng(options.seed, 400 + k);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<complexd> xs;
            while (int(xs.size()) < k) {
                const complexd z(2.0 * rng.next_double() - 1.0, 2.0 * rng.next_double() - 1.0);
                bool ok = true;
                for (const complexd& w : xs)
                    if (std::abs(z - w) < 0.15) ok = false;
                if (ok) xs.push_back(z);
            }
            const complexd det = moments::pairing_det(xs);
            const complexd sum = moments::pairing_sum(xs);
            worst = std::max(worst, std::abs(det - sum) / std::max(std::abs(sum), 1e-30));
        }
    }
    r.measured = worst;
    r.target = 0.0;
    r.passed = worst < r.tolerance;
    r.detail = "k in {2,4,6,8}, 100 instances each, max relative error " + format_double(worst);
    r.seconds = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------- criterion 5

CheckResult check_two_point(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 5;
    r.name = "two-point moment: quadrature vs closed form vs Green's function";
    RngStream rng(options.seed, 500);
    auto random_point = [&]() {
        return complexd(2.0 * rng.next_double() - 1.0, 0.3 + 1.2 * rng.next_double());
    };
    double worst_quad = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        complexd p = random_point(), q = random_point();
        while (std::abs(p - q) < 0.3) q = random_point();
        const auto family = moments::default_paths_halfplane({p, q});
        const auto quad = moments::two_point_quadrature(p, q, family.paths[0], family.paths[1]);
        worst_quad = std::max(worst_quad, std::fabs(quad.value - moments::two_point_closed(p, q)));
    }
    double worst_identity = 0.0;
    const auto half = lattice::DomainSpec::half_plane();
    for (int trial = 0; trial < 100; ++trial) {
        complexd p = random_point(), q = random_point();
        while (std::abs(p - q) < 0.1) q = random_point();
        const double closed = moments::two_point_closed(p, q);
        const double via_g = -16.0 / kPi * greens::g_dirichlet(half, p, q);
        worst_identity = std::max(worst_identity, std::fabs(closed - via_g));
    }
    r.tolerance = 1e-6;
    r.measured = worst_quad;
    r.target = 0.0;
    r.passed = worst_quad < 1e-6 && worst_identity < 1e-12;
    r.detail = "max |quadrature-closed| = " + format_double(worst_quad) +
               " (10 pairs); max |closed - (-16/pi) g_D| = " + format_double(worst_identity) +
               " (100 pairs, tol 1e-12)";
    r.seconds = seconds_since(t0);
    return r;
}

// ---------------------------------------------------------------- criterion 6

CheckResult check_spectral_greens(const CheckOptions&) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 6;
    r.name = "spectral Green's partial sums vs image-method oracle";
    r.tolerance = 1e-6;
    const auto rect = lattice::DomainSpec::rectangle(1.0, 1.0);
    const std::pair<complexd, complexd> pairs[5] = {
        {{0.3, 0.4}, {0.7, 0.6}}, {{0.25, 0.5}, {0.75, 0.5}}, {{0.2, 0.3}, {0.8, 0.7}},
        {{0.35, 0.65}, {0.65, 0.35}}, {{0.3, 0.3}, {0.7, 0.7}}};
    double worst = 0.0;
    std::ostringstream detail;
    bool all_ok = true;
    for (const auto& [z1, z2] : pairs) {
        const double oracle = greens::g_dirichlet(rect, z1, z2);
        double err = 1e300;
        int used = 0;
        for (int m : {100, 200, 400, 800, 1600}) {
            err = std::fabs(greens::spectral_gd_check(rect, z1, z2, m) - oracle);
            used = m;
            if (err < 1e-6) break;
        }
        if (err >= 1e-6) all_ok = false;
        worst = std::max(worst, err);
        detail << "M=" << used << " err=" << format_double(err) << "; ";
    }
    r.measured = worst;
    r.target = 0.0;
    r.passed = all_ok;
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

// ------------------------------------------------------- criteria 7, 8 and 9

struct SquareRun {
    int n = 0;
    int samples = 0;
    CovarianceEstimate cov;
    SampleMoments observable;
    double max_interior_dev = 0.0;
};

SquareRun run_square_experiment(int n, int samples, uint64_t seed) {
    SquareRun run;
    run.n = n;
    run.samples = samples;
    const auto region = square_region(n);
    batch::DimerBatchConfig config;
    config.algo = batch::Algorithm::Wilson;
    config.samples = samples;
    config.seed = seed + uint64_t(n) * 77777ULL;
    config.collect_vertex_sums = true;
    config.probe_points = {complexd(0.25, 0.5), complexd(0.75, 0.5)};
    config.phi = [](double x, double y) {
        return 2.0 * std::sin(kPi * x) * std::sin(kPi * y); // lowest Dirichlet mode
    };
    const auto result = batch::run_dimer_batch(region, config);

    std::vector<double> hp(result.probe_values[0].begin(), result.probe_values[0].end());
    std::vector<double> hq(result.probe_values[1].begin(), result.probe_values[1].end());
    run.cov = covariance_jackknife(hp, hq);
    run.observable = sample_moments(result.phi_observable);

    const auto prediction = height::predict_mean_height(region);
    const height::HeightEngine engine(region);
    const double eps = region.epsilon;
    double worst = 0.0;
    for (size_t i = 0; i < engine.vertices().size(); ++i) {
        const double x = eps * engine.vertices()[i].x, y = eps * engine.vertices()[i].y;
        if (std::min({x, y, 1.0 - x, 1.0 - y}) <= 0.2) continue;
        const double empirical = double(result.vertex_sums[i]) / double(samples);
        worst = std::max(worst, std::fabs(empirical - prediction[i]));
    }
    run.max_interior_dev = worst;
    return run;
}

std::vector<SquareRun> shared_square_runs(const CheckOptions& options) {
    std::vector<SquareRun> runs;
    if (options.small_budget) {
        runs.push_back(run_square_experiment(21, 20000, options.seed));
        runs.push_back(run_square_experiment(41, 20000, options.seed));
    } else {
        runs.push_back(run_square_experiment(21, 200000, options.seed));
        runs.push_back(run_square_experiment(41, 150000, options.seed));
        runs.push_back(run_square_experiment(81, 100000, options.seed));
    }
    return runs;
}

CheckResult check_covariance_convergence(const CheckOptions& options,
                                         const std::vector<SquareRun>& runs) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 7;
    r.name = "centered height covariance approaches -(16/pi) g_D";
    const double rel_tol = options.small_budget ? 0.25 : 0.10;
    r.tolerance = rel_tol;
    const auto rect = lattice::DomainSpec::rectangle(1.0, 1.0);
    const double target =
        -16.0 / kPi * greens::g_dirichlet(rect, complexd(0.25, 0.5), complexd(0.75, 0.5));
    r.target = target;
    std::ostringstream detail;
    std::vector<double> devs, ses;
    for (const SquareRun& run : runs) {
        devs.push_back(std::fabs(run.cov.covariance - target));
        ses.push_back(run.cov.standard_error);
        detail << "N=" << run.n << " cov=" << format_double(run.cov.covariance) << "+/-"
               << format_double(run.cov.standard_error) << "; ";
    }
    detail << "target=" << format_double(target);
    const SquareRun& finest = runs.back();
    r.measured = finest.cov.covariance;
    bool ok = std::fabs(finest.cov.covariance - target) < rel_tol * std::fabs(target);
    for (size_t i = 0; i + 1 < runs.size(); ++i) {
        if (devs[i + 1] > devs[i] + 2.0 * (ses[i] + ses[i + 1])) ok = false;
    }
    r.passed = ok;
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

CheckResult check_gaussianity(const CheckOptions& options, const std::vector<SquareRun>& runs) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 8;
    r.name = "smoothed observable is Gaussian with the predicted variance";
    const SquareRun& finest = runs.back();
    const double var_target = 16.0 / (kPi * 2.0 * kPi * kPi); // (16/pi)/(-lambda_11)
    const double var_tol = options.small_budget ? 0.20 : 0.10;
    const double skew_tol = options.small_budget ? 0.15 : 0.10;
    const double kurt_tol = options.small_budget ? 0.30 : 0.20;
    r.tolerance = var_tol;
    r.target = var_target;
    r.measured = finest.observable.variance;
    const double var_dev = std::fabs(finest.observable.variance - var_target) / var_target;
    r.passed = var_dev < var_tol && std::fabs(finest.observable.skewness) < skew_tol &&
               std::fabs(finest.observable.excess_kurtosis) < kurt_tol;
    std::ostringstream detail;
    detail << "N=" << finest.n << " var=" << format_double(finest.observable.variance)
           << " (target " << format_double(var_target) << ", rel dev " << format_double(var_dev)
           << "), skew=" << format_double(finest.observable.skewness)
           << " (tol " << skew_tol << "), kurt=" << format_double(finest.observable.excess_kurtosis)
           << " (tol " << kurt_tol << ")";
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

CheckResult check_mean_height(const CheckOptions& options, const std::vector<SquareRun>& runs) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 9;
    r.name = "empirical mean height matches the harmonic prediction";
    const SquareRun& finest = runs.back();
    r.tolerance = options.small_budget ? 0.15 : 0.10;
    r.target = 0.0;
    r.measured = finest.max_interior_dev;
    r.passed = finest.max_interior_dev < r.tolerance;
    r.detail = "N=" + std::to_string(finest.n) + ", max |mean - prediction| over interior (>0.2 from boundary) = " +
               format_double(finest.max_interior_dev);
    r.seconds = seconds_since(t0);
    return r;
}

// --------------------------------------------------------------- criterion 10

CheckResult check_gff_suite(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 10;
    r.name = "GFF variance, Wick moments and the k=4 quadrature oracle";
    const int samples = options.small_budget ? 20000 : 100000;
    const double var_tol = options.small_budget ? 0.05 : 0.02;
    const double wick_tol = options.small_budget ? 0.10 : 0.05;
    std::ostringstream detail;

    const auto rect = lattice::DomainSpec::rectangle(1.0, 1.0);
    const gff::GFFProcess process(rect, 64);
    const gff::PairedObservable obs1(process, gff::TestFunction::eigen(rect, 1, 1));
    const auto values = batch::run_gff_batch(process, {obs1}, samples, options.seed + 10);
    const SampleMoments m = sample_moments(values[0]);
    const double var_target = 1.0 / (2.0 * kPi * kPi);
    const double var_dev = std::fabs(m.variance - var_target) / var_target;
    detail << "Var(pair(f11))=" << format_double(m.variance) << " target "
           << format_double(var_target) << " rel dev " << format_double(var_dev) << "; ";

    const auto wick_a = gff::wick_check(process,
                                        {gff::TestFunction::eigen(rect, 1, 1),
                                         gff::TestFunction::eigen(rect, 1, 1),
                                         gff::TestFunction::eigen(rect, 2, 1),
                                         gff::TestFunction::eigen(rect, 2, 1)},
                                        samples, options.seed + 11);
    const auto wick_b = gff::wick_check(process,
                                        {gff::TestFunction::eigen(rect, 1, 1),
                                         gff::TestFunction::eigen(rect, 1, 1),
                                         gff::TestFunction::eigen(rect, 1, 1),
                                         gff::TestFunction::eigen(rect, 1, 1)},
                                        samples, options.seed + 12);
    detail << "wick max rel dev " << format_double(std::max(wick_a.max_rel_deviation,
                                                            wick_b.max_rel_deviation))
           << "; ";

    const std::vector<complexd> quadruple = {complexd(0, 1), complexd(0, 2), complexd(1, 1),
                                             complexd(-1, 2)};
    const auto pairing =
        moments::k_point_moment(lattice::DomainSpec::half_plane(), quadruple);
    const auto family = moments::default_paths_halfplane(quadruple);
    const auto quad = moments::sign_sum_moment_quadrature(quadruple, family, 1e-5);
    const double k4_rel = std::fabs(quad.value - pairing.value) / std::fabs(pairing.value);
    detail << "k=4 pairing=" << format_double(pairing.value) << " quadrature="
           << format_double(quad.value) << " rel dev " << format_double(k4_rel);

    r.tolerance = var_tol;
    r.target = var_target;
    r.measured = m.variance;
    r.passed = var_dev < var_tol && wick_a.max_rel_deviation < wick_tol &&
               wick_b.max_rel_deviation < wick_tol && k4_rel < 1e-4;
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

// --------------------------------------------------------------- criterion 11

CheckResult check_conformal_invariance(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 11;
    r.name = "conformal invariance of the smoothed field variance";
    r.tolerance = 1e-3;
    const auto disk = lattice::DomainSpec::unit_disk();
    const greens::Mobius maps[3] = {greens::disk_automorphism({0.3, 0.0}),
                                    greens::disk_automorphism({-0.2, 0.25}),
                                    greens::disk_automorphism({0.0, 0.5}, 0.7)};
    const std::pair<complexd, double> bumps[2] = {{complexd(0.2, 0.1), 0.35},
                                                  {complexd(-0.25, -0.15), 0.30}};
    const int order = options.small_budget ? 16 : 24;
    double worst = 0.0;
    for (const auto& map : maps) {
        for (const auto& [center, rho] : bumps) {
            const auto vars = gff::conformal_invariance_check(disk, disk, map, center, rho, order);
            worst = std::max(worst, std::fabs(vars.var_u - vars.var_v) / std::fabs(vars.var_u));
        }
    }
    r.measured = worst;
    r.target = 0.0;
    r.passed = worst < r.tolerance;
    r.detail = "3 Mobius maps x 2 bumps, max |VarX-VarY|/VarX = " + format_double(worst);
    r.seconds = seconds_since(t0);
    return r;
}

// ----------------------------------------------------------- extra exact check

CheckResult check_bijection_roundtrip(const CheckOptions& options) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.criterion = 0;
    r.name = "tree-tiling bijection round trips";
    r.tolerance = 0.0;
    int failures = 0;
    int trials = 0;
    for (int m : {3, 5, 7}) {
        const auto region = rect_minus_corner(m, m);
        const auto grid = sampler::EvenGrid::from_region(region);
        const Board board = Board::from_region(region);
        std::set<std::string> keys;
        for (int trial = 0; trial < 200; ++trial) {
            RngStream rng(options.seed, 600000ULL + m * 1000 + trial);
            const auto tree = sampler::wilson_spanning_tree(grid, rng);
            const auto tiling = sampler::temperley_tree_to_tiling(tree);
            ++trials;
            if (!tiling_is_valid(board, tiling)) {
                ++failures;
                continue;
            }
            const auto back = sampler::temperley_tiling_to_tree(grid, tiling);
            if (back.parent != tree.parent) ++failures;
            keys.insert(tiling.key());
        }
    }
    r.measured = failures;
    r.target = 0.0;
    r.passed = failures == 0;
    r.detail = std::to_string(trials) + " random trees on 3 rectangles, " +
               std::to_string(failures) + " round-trip failures";
    r.seconds = seconds_since(t0);
    return r;
}

} // namespace

std::vector<CheckResult> run_criteria(const std::vector<int>& ids, const CheckOptions& options) {
    std::vector<SquareRun> runs;
    auto ensure_runs = [&]() {
        if (runs.empty()) runs = shared_square_runs(options);
    };
    std::vector<CheckResult> out;
    for (int id : ids) {
        switch (id) {
            case 0: out.push_back(check_bijection_roundtrip(options)); break;
            case 1: out.push_back(check_exact_counting(options)); break;
            case 2: out.push_back(check_sampler_uniformity(options)); break;
            case 3: out.push_back(check_height_validity(options)); break;
            case 4: out.push_back(check_pairing_identity(options)); break;
            case 5: out.push_back(check_two_point(options)); break;
            case 6: out.push_back(check_spectral_greens(options)); break;
            case 7:
                ensure_runs();
                out.push_back(check_covariance_convergence(options, runs));
                break;
            case 8:
                ensure_runs();
                out.push_back(check_gaussianity(options, runs));
                break;
            case 9:
                ensure_runs();
                out.push_back(check_mean_height(options, runs));
                break;
            case 10: out.push_back(check_gff_suite(options)); break;
            case 11: out.push_back(check_conformal_invariance(options)); break;
            default: throw Error(ErrorKind::Contract, "unknown criterion " + std::to_string(id));
        }
    }
    return out;
}

std::vector<CheckResult> run_exact_suite(const CheckOptions& options) {
    return run_criteria({0, 1, 4, 5, 6, 11}, options);
}

std::vector<CheckResult> run_montecarlo_suite(const CheckOptions& options) {
    return run_criteria({2, 3, 7, 8, 9, 10}, options);
}

std::vector<CheckResult> run_all(const CheckOptions& options) {
    return run_criteria({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, options);
}

std::string format_result_line(const CheckResult& r) {
    std::ostringstream out;
    out << (r.passed ? "[PASS] " : "[FAIL] ");
    if (r.criterion > 0)
        out << "criterion " << r.criterion;
    else
        out << "exact extra";
    out << ": " << r.name << " | measured=" << format_double(r.measured)
        << " target=" << format_double(r.target) << " tol=" << format_double(r.tolerance) << " ("
        << format_double(r.seconds) << "s) | " << r.detail;
    return out.str();
}

} // namespace checks
} // namespace dimer
