#ifndef DIMER_BATCH_HPP
#define DIMER_BATCH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dimer/gff.hpp"
#include "dimer/height.hpp"
#include "dimer/sampler.hpp"

namespace dimer {
namespace batch {

// Monte Carlo batch over tilings of one region.  Per-sample RNG streams are
// derived from (seed, sample index), so results are identical for the serial
// and OpenMP runners and independent of the thread count: scalar observables
// land in per-sample slots and the vertex accumulators are integers.
enum class Algorithm { Wilson, Kasteleyn };

std::string algorithm_name(Algorithm a);

struct DimerBatchConfig {
    Algorithm algo = Algorithm::Wilson;
    int samples = 0;
    uint64_t seed = 0;
    std::function<double(double, double)> phi; // optional smoothed observable
    std::vector<complexd> probe_points;        // record heights at these points
    bool collect_vertex_sums = false;
    bool check_rules = false; // exact face/boundary validation per sample
};

struct DimerBatchResult {
    int samples = 0;
    std::vector<double> phi_observable;          // per sample, eps^2 sum phi h
    std::vector<std::vector<int>> probe_values;  // [probe][sample]
    std::vector<long long> vertex_sums;          // per region vertex
    long long face_rule_failures = 0;
    long long boundary_rule_failures = 0;
    std::vector<std::string> tiling_keys;        // only when keep_keys
    bool keep_keys = false;
};

DimerBatchResult run_dimer_batch_serial(const lattice::TemperleyanRegion& region,
                                        const DimerBatchConfig& config, bool keep_keys = false);
DimerBatchResult run_dimer_batch_parallel(const lattice::TemperleyanRegion& region,
                                          const DimerBatchConfig& config, bool keep_keys = false);
// parallel when OpenMP is available, serial otherwise
DimerBatchResult run_dimer_batch(const lattice::TemperleyanRegion& region,
                                 const DimerBatchConfig& config, bool keep_keys = false);

// GFF observable batch: values[o][s] = observable o paired with sample s.
std::vector<std::vector<double>> run_gff_batch_serial(
    const gff::GFFProcess& process, const std::vector<gff::PairedObservable>& observables,
    int samples, uint64_t seed);
std::vector<std::vector<double>> run_gff_batch_parallel(
    const gff::GFFProcess& process, const std::vector<gff::PairedObservable>& observables,
    int samples, uint64_t seed);
std::vector<std::vector<double>> run_gff_batch(const gff::GFFProcess& process,
                                               const std::vector<gff::PairedObservable>& observables,
                                               int samples, uint64_t seed);

// Law of the smoothed dimer observable against the law of (4/sqrt(pi)) times
// the paired free field: variance ratio, shape statistics, and a two-sample
// CDF distance with a simulation-calibrated threshold.
struct LawComparison {
    double epsilon = 0.0;
    int dimer_samples = 0;
    int gff_samples = 0;
    double dimer_variance = 0.0;
    double dimer_skewness = 0.0;
    double dimer_excess_kurtosis = 0.0;
    double gff_variance = 0.0;
    double gff_variance_analytic = 0.0;
    double variance_ratio = 0.0; // dimer / analytic target
    double ks_distance = 0.0;
    double ks_threshold = 0.0;   // 99.9% null quantile, simulated
    bool distribution_compatible = false;
};

LawComparison compare_dimer_to_gff(const lattice::TemperleyanRegion& region,
                                   const gff::TestFunction& phi, int dimer_samples,
                                   int gff_samples, int gff_modes, uint64_t seed);

} // namespace batch
} // namespace dimer

#endif
