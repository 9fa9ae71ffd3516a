// Benchmark of the OpenMP kernels against their serial references:
// tiling batches (Wilson and Kasteleyn), free-field pairing batches, and the
// conformal-invariance quadrature.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dimer/batch.hpp"

using namespace dimer;
using Clock = std::chrono::steady_clock;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx\n", name, serial,
                parallel, serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; parallel timings fall back to serial\n");
#endif

    const auto region = lattice::approximate_domain(
        lattice::DomainSpec::rectangle(1.0, 1.0, {0.0, 0.0}), 1.0 / 41);

    {
        batch::DimerBatchConfig config;
        config.algo = batch::Algorithm::Wilson;
        config.samples = 4000;
        config.seed = 7;
        config.collect_vertex_sums = true;
        config.phi = [](double x, double y) { return x * y; };
        const double s = time_of([&] { batch::run_dimer_batch_serial(region, config); });
        const double p = time_of([&] { batch::run_dimer_batch_parallel(region, config); });
        report("wilson batch (N=41, 4000)", s, p);
    }
    {
        const auto small = lattice::approximate_domain(
            lattice::DomainSpec::rectangle(1.0, 1.0, {0.0, 0.0}), 1.0 / 21);
        batch::DimerBatchConfig config;
        config.algo = batch::Algorithm::Kasteleyn;
        config.samples = 100;
        config.seed = 7;
        const double s = time_of([&] { batch::run_dimer_batch_serial(small, config); });
        const double p = time_of([&] { batch::run_dimer_batch_parallel(small, config); });
        report("kasteleyn batch (N=21, 100)", s, p);
    }
    {
        const auto rect = lattice::DomainSpec::rectangle(1.0, 1.0);
        const gff::GFFProcess process(rect, 4096);
        const std::vector<gff::PairedObservable> obs = {
            gff::PairedObservable(process, gff::TestFunction::eigen(rect, 1, 1)),
            gff::PairedObservable(process, gff::TestFunction::bump(complexd(0.4, 0.5), 0.3))};
        const double s =
            time_of([&] { batch::run_gff_batch_serial(process, obs, 20000, 3); });
        const double p =
            time_of([&] { batch::run_gff_batch_parallel(process, obs, 20000, 3); });
        report("gff batch (4096 modes)", s, p);
    }
    {
        const auto disk = lattice::DomainSpec::unit_disk();
        const greens::Mobius map = greens::disk_automorphism({0.3, 0.0});
        // the quadrature parallelises over outer nodes; serial timing comes
        // from pinning one thread
        double s = 0.0, p = 0.0;
#ifdef _OPENMP
        const int before = omp_get_max_threads();
        omp_set_num_threads(1);
        s = time_of([&] {
            gff::conformal_invariance_check(disk, disk, map, complexd(0.2, 0.1), 0.35, 24);
        });
        omp_set_num_threads(before);
        p = time_of([&] {
            gff::conformal_invariance_check(disk, disk, map, complexd(0.2, 0.1), 0.35, 24);
        });
#else
        s = p = time_of([&] {
            gff::conformal_invariance_check(disk, disk, map, complexd(0.2, 0.1), 0.35, 24);
        });
#endif
        report("conformal quadrature", s, p);
    }
    return 0;
}
