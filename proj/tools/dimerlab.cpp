// dimerlab: build Temperleyan regions, count and sample domino tilings,
// compute height statistics, evaluate the continuum moment formulas, sample
// the free field, and run the verification suites.
//
// Exit codes: 0 ok, 2 usage/input error, 3 verification failure, 4 internal.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dimer/batch.hpp"
#include "dimer/checks.hpp"
#include "dimer/gff.hpp"
#include "dimer/height.hpp"
#include "dimer/kasteleyn.hpp"
#include "dimer/moments.hpp"
#include "dimer/sampler.hpp"
#include "dimer/svg.hpp"

namespace fs = std::filesystem;
using namespace dimer;
using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string resolve_out(const std::string& out, const std::string& fallback) {
    if (!out.empty()) return out;
    const char* dir = std::getenv("DIMERLAB_OUT");
    if (dir != nullptr && *dir != '\0') return (fs::path(dir) / fallback).string();
    return fallback;
}

void write_file(const std::string& path, const std::string& content) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
    out << content;
}

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

lattice::DomainSpec parse_domain(const std::string& text) {
    if (text == "halfplane") return lattice::DomainSpec::half_plane();
    if (text == "disk") return lattice::DomainSpec::unit_disk();
    if (text.rfind("rect:", 0) == 0) {
        double a = 1, b = 1;
        if (std::sscanf(text.c_str() + 5, "%lf,%lf", &a, &b) != 2)
            throw Error(ErrorKind::Usage, "expected rect:a,b");
        return lattice::DomainSpec::rectangle(a, b);
    }
    throw Error(ErrorKind::Usage, "unknown domain: " + text);
}

gff::TestFunction parse_phi(const std::string& text, const lattice::DomainSpec& rect) {
    if (text.rfind("eigen:", 0) == 0) {
        int j = 1, k = 1;
        if (std::sscanf(text.c_str() + 6, "%d,%d", &j, &k) != 2)
            throw Error(ErrorKind::Usage, "expected eigen:j,k");
        return gff::TestFunction::eigen(rect, j, k);
    }
    if (text.rfind("bump:", 0) == 0) {
        double x = 0, y = 0, r = 0;
        if (std::sscanf(text.c_str() + 5, "%lf,%lf,%lf", &x, &y, &r) != 3)
            throw Error(ErrorKind::Usage, "expected bump:x,y,r");
        return gff::TestFunction::bump(complexd(x, y), r);
    }
    throw Error(ErrorKind::Usage, "unknown test function: " + text);
}

std::vector<complexd> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Io, std::string("bad points JSON: ") + e.what());
    }
    std::vector<complexd> points;
    for (const auto& item : j) points.push_back(complexd(item[0].get<double>(), item[1].get<double>()));
    return points;
}

// ---- subcommand bodies -------------------------------------------------------

int cmd_region(const std::string& kind, double a, double b, double eps, double bx, double by,
               const std::string& out) {
    lattice::DomainSpec spec = lattice::DomainSpec::rectangle(1.0, 1.0);
    if (kind == "rect")
        spec = lattice::DomainSpec::rectangle(a, b, complexd(bx, by));
    else if (kind == "disk")
        spec = lattice::DomainSpec::unit_disk(std::abs(complexd(bx, by)) > 0
                                                  ? complexd(bx, by)
                                                  : complexd(-1.0, 0.0));
    else
        throw Error(ErrorKind::Usage, "region kind must be rect or disk");
    const auto region = lattice::approximate_domain(spec, eps);
    const auto report = lattice::validate_temperleyan(region);
    std::cout << report.summary();
    if (!report.all_passed()) throw Error(ErrorKind::Internal, "constructed region failed validation");
    const std::string path = resolve_out(out, "region.json");
    lattice::save_region(region, path);
    std::cout << "region: " << region.cells.size() << " cells, root (" << region.root.x << ","
              << region.root.y << "), written to " << path << "\n";
    return 0;
}

int cmd_count(const std::string& region_path) {
    const auto region = lattice::load_region(region_path);
    const Board board = Board::from_region(region);
    std::cout << enumerate::count_tilings(board).to_string() << "\n";
    return 0;
}

int cmd_sample(const std::string& region_path, const std::string& algo, int samples,
               uint64_t seed, const std::string& out_dir) {
    const auto region = lattice::load_region(region_path);
    const std::string dir = resolve_out(out_dir, "samples");
    fs::create_directories(dir);
    batch::Algorithm algorithm;
    if (algo == "kasteleyn")
        algorithm = batch::Algorithm::Kasteleyn;
    else if (algo == "wilson")
        algorithm = batch::Algorithm::Wilson;
    else
        throw Error(ErrorKind::Usage, "algo must be kasteleyn or wilson");

    std::optional<sampler::KasteleynSampler> ks;
    std::optional<sampler::EvenGrid> grid;
    if (algorithm == batch::Algorithm::Kasteleyn)
        ks.emplace(Board::from_region(region));
    else
        grid = sampler::EvenGrid::from_region(region);
    std::set<std::string> distinct;
    for (int s = 0; s < samples; ++s) {
        RngStream rng(seed, uint64_t(s));
        const Tiling tiling = algorithm == batch::Algorithm::Kasteleyn
                                  ? ks->sample(rng)
                                  : sampler::temperley_tree_to_tiling(
                                        sampler::wilson_spanning_tree(*grid, rng));
        distinct.insert(tiling.key());
        char name[64];
        std::snprintf(name, sizeof(name), "tiling_%06d.txt", s);
        write_file((fs::path(dir) / name).string(), tiling_to_text(tiling));
    }
    json meta;
    meta["algorithm"] = algo;
    meta["seed"] = seed;
    meta["samples"] = samples;
    meta["rng"] = RngStream::kGeneratorName;
    meta["regionCells"] = region.cells.size();
    meta["distinctTilings"] = distinct.size();
    write_file((fs::path(dir) / "metadata.json").string(), meta.dump(2) + "\n");
    std::cout << "wrote " << samples << " tilings (" << distinct.size() << " distinct) to " << dir
              << "\n";
    return 0;
}

int cmd_height(const std::string& region_path, const std::string& tiling_path,
               const std::string& out) {
    const auto region = lattice::load_region(region_path);
    std::ifstream in(tiling_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + tiling_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const Tiling tiling = tiling_from_text(ss.str());
    const height::HeightEngine engine(region);
    const auto field = engine.compute(tiling);
    const std::string path = resolve_out(out, "heights.csv");
    write_file(path, height_csv(engine, field.values));
    std::cout << "heights written to " << path << "\n";
    return 0;
}

int cmd_moments(const std::string& domain_text, const std::string& points_path, int k,
                const std::string& method, const std::string& out) {
    const auto domain = parse_domain(domain_text);
    std::vector<complexd> points = load_points(points_path);
    if (int(points.size()) < k) throw Error(ErrorKind::Usage, "need at least k points");
    points.resize(k);
    std::ostringstream csv;
    csv << "k,method,value,error_estimate\n";
    if (method == "pairing" || method == "both") {
        const auto res = moments::k_point_moment(domain, points);
        csv << k << ",pairing," << fmt17(res.value) << "," << fmt17(res.error_estimate) << "\n";
    }
    if (method == "quadrature" || method == "both") {
        if (domain.kind != lattice::DomainSpec::Kind::HalfPlane)
            throw Error(ErrorKind::Usage, "quadrature oracle runs on the half-plane");
        const auto family = moments::default_paths_halfplane(points);
        const auto res = moments::sign_sum_moment_quadrature(points, family, 1e-5);
        csv << k << ",quadrature," << fmt17(res.value) << "," << fmt17(res.error_estimate)
            << "\n";
    }
    if (method != "pairing" && method != "quadrature" && method != "both")
        throw Error(ErrorKind::Usage, "method must be pairing, quadrature or both");
    const std::string path = resolve_out(out, "moments.csv");
    write_file(path, csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_gff(const std::string& domain_text, int modes, int samples, const std::string& phi_text,
            uint64_t seed, const std::string& out) {
    const auto rect = parse_domain(domain_text);
    if (rect.kind != lattice::DomainSpec::Kind::Rectangle)
        throw Error(ErrorKind::Usage, "gff sampling needs a rectangle domain");
    const gff::GFFProcess process(rect, modes);
    const gff::TestFunction phi = parse_phi(phi_text, rect);
    const gff::PairedObservable obs(process, phi);
    const auto values = batch::run_gff_batch(process, {obs}, samples, seed);
    const SampleMoments m = sample_moments(values[0]);
    std::ostringstream csv;
    csv << "statistic,value\n";
    csv << "samples," << samples << "\n";
    csv << "modes," << modes << "\n";
    csv << "mean," << fmt17(m.mean) << "\n";
    csv << "variance," << fmt17(m.variance) << "\n";
    csv << "skewness," << fmt17(m.skewness) << "\n";
    csv << "excess_kurtosis," << fmt17(m.excess_kurtosis) << "\n";
    csv << "variance_analytic," << fmt17(obs.variance_analytic()) << "\n";
    csv << "rng," << RngStream::kGeneratorName << "\n";
    const std::string path = resolve_out(out, "gff.csv");
    write_file(path, csv.str());
    std::cout << csv.str();
    return 0;
}

int cmd_render(const std::string& region_path, const std::string& tiling_path, bool with_heights,
               const std::string& out) {
    const auto region = lattice::load_region(region_path);
    std::ifstream in(tiling_path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + tiling_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const Tiling tiling = tiling_from_text(ss.str());
    if (!tiling_is_valid(Board::from_region(region), tiling))
        throw Error(ErrorKind::Usage, "tiling does not tile the region");
    std::string svg;
    if (with_heights) {
        const height::HeightEngine engine(region);
        const auto field = engine.compute(tiling);
        svg = render_tiling_svg(region, tiling, &field.values);
    } else {
        svg = render_tiling_svg(region, tiling, nullptr);
    }
    const std::string path = resolve_out(out, "tiling.svg");
    write_file(path, svg);
    std::cout << "svg written to " << path << "\n";
    return 0;
}

int cmd_verify(const std::string& suite, const std::string& budget, uint64_t seed,
               const std::string& out) {
    checks::CheckOptions options;
    options.seed = seed;
    if (budget == "small")
        options.small_budget = true;
    else if (budget != "full")
        throw Error(ErrorKind::Usage, "budget must be small or full");
    std::vector<checks::CheckResult> results;
    if (suite == "exact")
        results = checks::run_exact_suite(options);
    else if (suite == "montecarlo")
        results = checks::run_montecarlo_suite(options);
    else if (suite == "all")
        results = checks::run_all(options);
    else
        throw Error(ErrorKind::Usage, "suite must be exact, montecarlo or all");

    json manifest;
    std::ostringstream config;
    config << "verify;suite=" << suite << ";budget=" << budget << ";seed=" << seed;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  (unsigned long long)(fnv1a(config.str())));
    manifest["configHash"] = hash;
    manifest["suite"] = suite;
    manifest["budget"] = budget;
    manifest["seed"] = seed;
    manifest["rng"] = RngStream::kGeneratorName;
    manifest["checks"] = json::array();
    int failures = 0;
    for (const auto& r : results) {
        std::cout << checks::format_result_line(r) << "\n";
        if (!r.passed) ++failures;
        json entry;
        entry["criterion"] = r.criterion;
        entry["name"] = r.name;
        entry["passed"] = r.passed;
        entry["measured"] = r.measured;
        entry["target"] = r.target;
        entry["tolerance"] = r.tolerance;
        entry["detail"] = r.detail;
        entry["seconds"] = r.seconds;
        manifest["checks"].push_back(entry);
    }
    manifest["failures"] = failures;
    const std::string path = resolve_out(out, "manifest.json");
    write_file(path, manifest.dump(2) + "\n");
    std::cout << "manifest written to " << path << "\n";
    return failures == 0 ? 0 : 3;
}

int cmd_experiment(const std::string& ns_text, int samples, uint64_t seed,
                   const std::string& out_dir) {
    std::vector<int> ns;
    {
        size_t pos = 0;
        while (pos < ns_text.size()) {
            size_t next = ns_text.find(',', pos);
            if (next == std::string::npos) next = ns_text.size();
            ns.push_back(std::atoi(ns_text.substr(pos, next - pos).c_str()));
            pos = next + 1;
        }
    }
    if (ns.empty()) throw Error(ErrorKind::Usage, "need at least one lattice size");
    const std::string dir = resolve_out(out_dir, "experiment");
    fs::create_directories(dir);

    const auto square = lattice::DomainSpec::rectangle(1.0, 1.0, {0.0, 0.0});
    const complexd p(0.25, 0.5), q(0.75, 0.5);
    const double cov_target = -16.0 / kPi * greens::g_dirichlet(square, p, q);

    std::ostringstream csv;
    csv << "N,epsilon,samples,cov,cov_se,cov_target,obs_variance,obs_skewness,obs_kurtosis,"
           "var_target,max_mean_dev,gff_variance_ratio,ks_distance,ks_threshold\n";
    for (int n : ns) {
        const auto region = lattice::approximate_domain(square, 1.0 / n);
        batch::DimerBatchConfig config;
        config.algo = batch::Algorithm::Wilson;
        config.samples = samples;
        config.seed = seed + uint64_t(n);
        config.collect_vertex_sums = true;
        config.probe_points = {p, q};
        const gff::TestFunction phi = gff::TestFunction::eigen(square, 1, 1);
        config.phi = phi.f;
        const auto result = batch::run_dimer_batch(region, config);
        std::vector<double> hp(result.probe_values[0].begin(), result.probe_values[0].end());
        std::vector<double> hq(result.probe_values[1].begin(), result.probe_values[1].end());
        const auto cov = covariance_jackknife(hp, hq);
        const SampleMoments om = sample_moments(result.phi_observable);
        const auto prediction = height::predict_mean_height(region);
        const height::HeightEngine engine(region);
        double max_dev = 0.0;
        for (size_t i = 0; i < engine.vertices().size(); ++i) {
            const double x = region.epsilon * engine.vertices()[i].x;
            const double y = region.epsilon * engine.vertices()[i].y;
            if (std::min({x, y, 1.0 - x, 1.0 - y}) <= 0.2) continue;
            max_dev = std::max(max_dev, std::fabs(double(result.vertex_sums[i]) / samples -
                                                  prediction[i]));
        }
        const auto law = batch::compare_dimer_to_gff(region, phi, samples,
                                                     std::min(samples, 20000), 1024,
                                                     seed + uint64_t(n) + 5);
        const double var_target = 16.0 / (kPi * 2.0 * kPi * kPi);
        csv << n << "," << fmt17(region.epsilon) << "," << samples << ","
            << fmt17(cov.covariance) << "," << fmt17(cov.standard_error) << ","
            << fmt17(cov_target) << "," << fmt17(om.variance) << "," << fmt17(om.skewness) << ","
            << fmt17(om.excess_kurtosis) << "," << fmt17(var_target) << "," << fmt17(max_dev)
            << "," << fmt17(law.variance_ratio) << "," << fmt17(law.ks_distance) << ","
            << fmt17(law.ks_threshold) << "\n";
        std::cout << "N=" << n << " done\n";
    }
    write_file((fs::path(dir) / "experiment.csv").string(), csv.str());
    json meta;
    meta["seed"] = seed;
    meta["samples"] = samples;
    meta["rng"] = RngStream::kGeneratorName;
    meta["covTarget"] = cov_target;
    write_file((fs::path(dir) / "metadata.json").string(), meta.dump(2) + "\n");
    std::cout << "experiment table written to " << dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimer tiling laboratory"};
    app.require_subcommand(1);

    // region
    auto* region_cmd = app.add_subcommand("region", "build a Temperleyan region");
    std::string region_kind = "rect", region_out;
    double region_a = 1.0, region_b = 1.0, region_eps = 0.05, region_bx = 0.0, region_by = 0.0;
    region_cmd->add_option("--kind", region_kind, "rect or disk");
    region_cmd->add_option("--a", region_a);
    region_cmd->add_option("--b", region_b);
    region_cmd->add_option("--eps", region_eps)->required();
    region_cmd->add_option("--basepoint-x", region_bx);
    region_cmd->add_option("--basepoint-y", region_by);
    region_cmd->add_option("--out", region_out);

    // count
    auto* count_cmd = app.add_subcommand("count", "exact tiling count of a region");
    std::string count_region;
    count_cmd->add_option("--region", count_region)->required();

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "draw exact uniform tilings");
    std::string sample_region, sample_algo = "wilson", sample_out;
    int sample_count = 1;
    uint64_t sample_seed = 0;
    sample_cmd->add_option("--region", sample_region)->required();
    sample_cmd->add_option("--algo", sample_algo);
    sample_cmd->add_option("--samples", sample_count);
    sample_cmd->add_option("--seed", sample_seed)->required();
    sample_cmd->add_option("--out", sample_out);

    // height
    auto* height_cmd = app.add_subcommand("height", "height field of a tiling");
    std::string height_region, height_tiling, height_out;
    height_cmd->add_option("--region", height_region)->required();
    height_cmd->add_option("--tiling", height_tiling)->required();
    height_cmd->add_option("--out", height_out);

    // moments
    auto* moments_cmd = app.add_subcommand("moments", "continuum k-point moments");
    std::string moments_domain = "halfplane", moments_points, moments_method = "pairing",
                moments_out;
    int moments_k = 2;
    moments_cmd->add_option("--domain", moments_domain);
    moments_cmd->add_option("--points", moments_points)->required();
    moments_cmd->add_option("--k", moments_k);
    moments_cmd->add_option("--method", moments_method);
    moments_cmd->add_option("--out", moments_out);

    // gff
    auto* gff_cmd = app.add_subcommand("gff", "sample the massless free field");
    std::string gff_domain = "rect:1,1", gff_phi = "eigen:1,1", gff_out;
    int gff_modes = 4096, gff_samples = 10000;
    uint64_t gff_seed = 0;
    gff_cmd->add_option("--domain", gff_domain);
    gff_cmd->add_option("--modes", gff_modes);
    gff_cmd->add_option("--samples", gff_samples);
    gff_cmd->add_option("--phi", gff_phi);
    gff_cmd->add_option("--seed", gff_seed)->required();
    gff_cmd->add_option("--out", gff_out);

    // render
    auto* render_cmd = app.add_subcommand("render", "render a tiling as SVG");
    std::string render_region, render_tiling, render_out;
    bool render_heights = false;
    render_cmd->add_option("--region", render_region)->required();
    render_cmd->add_option("--tiling", render_tiling)->required();
    render_cmd->add_flag("--heights", render_heights);
    render_cmd->add_option("--out", render_out);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
    std::string verify_suite = "all", verify_budget = "full", verify_out;
    uint64_t verify_seed = 20240817ULL;
    verify_cmd->add_option("--suite", verify_suite);
    verify_cmd->add_option("--budget", verify_budget);
    verify_cmd->add_option("--seed", verify_seed);
    verify_cmd->add_option("--out", verify_out);

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "scaling study on the unit square");
    std::string exp_ns = "21,41", exp_out;
    int exp_samples = 20000;
    uint64_t exp_seed = 0;
    exp_cmd->add_option("--ns", exp_ns);
    exp_cmd->add_option("--samples", exp_samples);
    exp_cmd->add_option("--seed", exp_seed)->required();
    exp_cmd->add_option("--out", exp_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (region_cmd->parsed())
            return cmd_region(region_kind, region_a, region_b, region_eps, region_bx, region_by,
                              region_out);
        if (count_cmd->parsed()) return cmd_count(count_region);
        if (sample_cmd->parsed())
            return cmd_sample(sample_region, sample_algo, sample_count, sample_seed, sample_out);
        if (height_cmd->parsed()) return cmd_height(height_region, height_tiling, height_out);
        if (moments_cmd->parsed())
            return cmd_moments(moments_domain, moments_points, moments_k, moments_method,
                               moments_out);
        if (gff_cmd->parsed())
            return cmd_gff(gff_domain, gff_modes, gff_samples, gff_phi, gff_seed, gff_out);
        if (render_cmd->parsed())
            return cmd_render(render_region, render_tiling, render_heights, render_out);
        if (verify_cmd->parsed())
            return cmd_verify(verify_suite, verify_budget, verify_seed, verify_out);
        if (exp_cmd->parsed()) return cmd_experiment(exp_ns, exp_samples, exp_seed, exp_out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Internal:
            case ErrorKind::Numeric:
                return 4;
            default:
                return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
