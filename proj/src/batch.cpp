#include "dimer/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dimer {
namespace batch {

std::string algorithm_name(Algorithm a) {
    return a == Algorithm::Wilson ? "wilson" : "kasteleyn";
}

namespace {

struct BatchContext {
    const lattice::TemperleyanRegion* region = nullptr;
    const DimerBatchConfig* config = nullptr;
    height::HeightEngine engine;
    std::optional<sampler::EvenGrid> grid;          // Wilson
    std::optional<sampler::KasteleynSampler> ksamp; // Kasteleyn
    std::vector<double> phi_at_vertex;
    std::vector<int> probe_indices;
    double eps2 = 1.0;

    BatchContext(const lattice::TemperleyanRegion& r, const DimerBatchConfig& c)
        : region(&r), config(&c), engine(r) {
        if (c.samples <= 0) throw Error(ErrorKind::Contract, "batch needs a positive sample count");
        if (c.algo == Algorithm::Wilson)
            grid = sampler::EvenGrid::from_region(r);
        else
            ksamp.emplace(Board::from_region(r));
        if (c.phi) {
            phi_at_vertex.resize(engine.vertices().size());
            for (size_t i = 0; i < engine.vertices().size(); ++i)
                phi_at_vertex[i] = c.phi(r.epsilon * engine.vertices()[i].x,
                                         r.epsilon * engine.vertices()[i].y);
        }
        for (const complexd& p : c.probe_points)
            probe_indices.push_back(engine.vertex_index(engine.nearest_vertex(p)));
        eps2 = r.epsilon * r.epsilon;
    }

    Tiling draw(uint64_t stream) const {
        RngStream rng(config->seed, stream);
        if (config->algo == Algorithm::Wilson) {
            const sampler::SpanningTree tree = sampler::wilson_spanning_tree(*grid, rng);
            return sampler::temperley_tree_to_tiling(tree);
        }
        return ksamp->sample(rng);
    }
};

struct LocalAccumulator {
    std::vector<long long> vertex_sums;
    long long face_failures = 0;
    long long boundary_failures = 0;
};

void process_sample(const BatchContext& ctx, int s, std::vector<int>& heights,
                    DimerBatchResult& result, LocalAccumulator& local) {
    const Tiling tiling = ctx.draw(uint64_t(s));
    ctx.engine.compute(tiling, heights);
    if (ctx.config->check_rules) {
        if (!ctx.engine.face_rule_holds(heights)) ++local.face_failures;
        if (!ctx.engine.boundary_rule_holds(heights)) ++local.boundary_failures;
    }
    if (!ctx.phi_at_vertex.empty()) {
        double sum = 0.0;
        for (size_t i = 0; i < heights.size(); ++i) sum += ctx.phi_at_vertex[i] * heights[i];
        result.phi_observable[s] = ctx.eps2 * sum;
    }
    for (size_t p = 0; p < ctx.probe_indices.size(); ++p)
        result.probe_values[p][s] = heights[ctx.probe_indices[p]];
    if (!local.vertex_sums.empty())
        for (size_t i = 0; i < heights.size(); ++i) local.vertex_sums[i] += heights[i];
    if (result.keep_keys) result.tiling_keys[s] = tiling.key();
}

DimerBatchResult prepare_result(const BatchContext& ctx, bool keep_keys) {
    DimerBatchResult result;
    result.samples = ctx.config->samples;
    result.keep_keys = keep_keys;
    if (ctx.config->phi) result.phi_observable.assign(ctx.config->samples, 0.0);
    result.probe_values.assign(ctx.probe_indices.size(),
                               std::vector<int>(ctx.config->samples, 0));
    if (keep_keys) result.tiling_keys.assign(ctx.config->samples, {});
    return result;
}

} // namespace

DimerBatchResult run_dimer_batch_serial(const lattice::TemperleyanRegion& region,
                                        const DimerBatchConfig& config, bool keep_keys) {
    BatchContext ctx(region, config);
    DimerBatchResult result = prepare_result(ctx, keep_keys);
    LocalAccumulator local;
    if (config.collect_vertex_sums) local.vertex_sums.assign(ctx.engine.vertices().size(), 0);
    std::vector<int> heights;
    for (int s = 0; s < config.samples; ++s) process_sample(ctx, s, heights, result, local);
    result.vertex_sums = std::move(local.vertex_sums);
    result.face_rule_failures = local.face_failures;
    result.boundary_rule_failures = local.boundary_failures;
    return result;
}

DimerBatchResult run_dimer_batch_parallel(const lattice::TemperleyanRegion& region,
                                          const DimerBatchConfig& config, bool keep_keys) {
#ifndef _OPENMP
    return run_dimer_batch_serial(region, config, keep_keys);
#else
    BatchContext ctx(region, config);
    DimerBatchResult result = prepare_result(ctx, keep_keys);
    const size_t nv = ctx.engine.vertices().size();
    std::vector<LocalAccumulator> locals(omp_get_max_threads());
    std::exception_ptr failure;
#pragma omp parallel
    {
        LocalAccumulator& local = locals[omp_get_thread_num()];
        if (config.collect_vertex_sums) local.vertex_sums.assign(nv, 0);
        std::vector<int> heights;
#pragma omp for schedule(dynamic, 16)
        for (int s = 0; s < config.samples; ++s) {
            if (failure) continue;
            try {
                process_sample(ctx, s, heights, result, local);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    if (config.collect_vertex_sums) {
        result.vertex_sums.assign(nv, 0);
        for (const LocalAccumulator& local : locals) {
            if (local.vertex_sums.empty()) continue;
            for (size_t i = 0; i < nv; ++i) result.vertex_sums[i] += local.vertex_sums[i];
        }
    }
    for (const LocalAccumulator& local : locals) {
        result.face_rule_failures += local.face_failures;
        result.boundary_rule_failures += local.boundary_failures;
    }
    return result;
#endif
}

DimerBatchResult run_dimer_batch(const lattice::TemperleyanRegion& region,
                                 const DimerBatchConfig& config, bool keep_keys) {
#ifdef _OPENMP
    return run_dimer_batch_parallel(region, config, keep_keys);
#else
    return run_dimer_batch_serial(region, config, keep_keys);
#endif
}

std::vector<std::vector<double>> run_gff_batch_serial(
    const gff::GFFProcess& process, const std::vector<gff::PairedObservable>& observables,
    int samples, uint64_t seed) {
    std::vector<std::vector<double>> values(observables.size(),
                                            std::vector<double>(samples, 0.0));
    std::vector<double> coeff;
    for (int s = 0; s < samples; ++s) {
        RngStream rng(seed, uint64_t(s));
        process.sample_coefficients(rng, coeff);
        for (size_t o = 0; o < observables.size(); ++o) values[o][s] = observables[o].pair(coeff);
    }
    return values;
}

std::vector<std::vector<double>> run_gff_batch_parallel(
    const gff::GFFProcess& process, const std::vector<gff::PairedObservable>& observables,
    int samples, uint64_t seed) {
#ifndef _OPENMP
    return run_gff_batch_serial(process, observables, samples, seed);
#else
    std::vector<std::vector<double>> values(observables.size(),
                                            std::vector<double>(samples, 0.0));
#pragma omp parallel
    {
        std::vector<double> coeff;
#pragma omp for schedule(static)
        for (int s = 0; s < samples; ++s) {
            RngStream rng(seed, uint64_t(s));
            process.sample_coefficients(rng, coeff);
            for (size_t o = 0; o < observables.size(); ++o)
                values[o][s] = observables[o].pair(coeff);
        }
    }
    return values;
#endif
}

std::vector<std::vector<double>> run_gff_batch(const gff::GFFProcess& process,
                                               const std::vector<gff::PairedObservable>& observables,
                                               int samples, uint64_t seed) {
#ifdef _OPENMP
    return run_gff_batch_parallel(process, observables, samples, seed);
#else
    return run_gff_batch_serial(process, observables, samples, seed);
#endif
}

namespace {

std::vector<double> standardized(std::vector<double> xs) {
    const SampleMoments m = sample_moments(xs);
    const double sd = std::sqrt(std::max(m.variance, 1e-300));
    for (double& x : xs) x = (x - m.mean) / sd;
    return xs;
}

// 99.9% quantile of the two-sample KS distance under the null, by simulation
double simulate_ks_threshold(size_t n1, size_t n2, uint64_t seed) {
    const int replicas = 400;
    std::vector<double> stats(replicas);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int r = 0; r < replicas; ++r) {
        RngStream rng(seed ^ 0x9E3779B97F4A7C15ULL, uint64_t(r));
        std::vector<double> a(n1), b(n2);
        for (double& v : a) v = rng.next_normal();
        for (double& v : b) v = rng.next_normal();
        stats[r] = ks_distance(std::move(a), std::move(b));
    }
    std::sort(stats.begin(), stats.end());
    const size_t idx = std::min(stats.size() - 1, size_t(std::ceil(0.999 * replicas)) - 1);
    return stats[idx];
}

} // namespace

LawComparison compare_dimer_to_gff(const lattice::TemperleyanRegion& region,
                                   const gff::TestFunction& phi, int dimer_samples,
                                   int gff_samples, int gff_modes, uint64_t seed) {
    LawComparison out;
    out.epsilon = region.epsilon;
    out.dimer_samples = dimer_samples;
    out.gff_samples = gff_samples;

    DimerBatchConfig config;
    config.algo = Algorithm::Wilson;
    config.samples = dimer_samples;
    config.seed = seed;
    config.phi = phi.f;
    const auto dimer_result = run_dimer_batch(region, config);
    const SampleMoments dm = sample_moments(dimer_result.phi_observable);
    out.dimer_variance = dm.variance;
    out.dimer_skewness = dm.skewness;
    out.dimer_excess_kurtosis = dm.excess_kurtosis;

    const double side = 1.0; // regions from the unit-square family
    const gff::GFFProcess process(lattice::DomainSpec::rectangle(side, side), gff_modes);
    const gff::PairedObservable obs(process, phi);
    const auto gff_values = run_gff_batch(process, {obs}, gff_samples, seed + 1);
    const double scale = 4.0 / std::sqrt(3.14159265358979323846);
    std::vector<double> scaled = gff_values[0];
    for (double& v : scaled) v *= scale;
    const SampleMoments gm = sample_moments(scaled);
    out.gff_variance = gm.variance;
    out.gff_variance_analytic = scale * scale * obs.variance_analytic();
    out.variance_ratio = out.dimer_variance / out.gff_variance_analytic;

    std::vector<double> centered = dimer_result.phi_observable;
    out.ks_distance = ks_distance(standardized(std::move(centered)), standardized(std::move(scaled)));
    out.ks_threshold =
        simulate_ks_threshold(size_t(dimer_samples), size_t(gff_samples), seed + 2);
    out.distribution_compatible = out.ks_distance < out.ks_threshold;
    return out;
}

} // namespace batch
} // namespace dimer
