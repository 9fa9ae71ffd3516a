#ifndef DIMER_CHECKS_HPP
#define DIMER_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dimer {
namespace checks {

struct CheckResult {
    int criterion = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    std::string detail;
    double seconds = 0.0;
};

// `small_budget` shrinks Monte Carlo sample counts and widens the statistical
// tolerances; the widened numbers are reported in each CheckResult.
struct CheckOptions {
    bool small_budget = false;
    uint64_t seed = 20240817ULL;
};

// criteria 1..11; throws Contract for unknown ids
std::vector<CheckResult> run_criteria(const std::vector<int>& ids, const CheckOptions& options);
std::vector<CheckResult> run_exact_suite(const CheckOptions& options);      // 1,4,5,6,10,11
std::vector<CheckResult> run_montecarlo_suite(const CheckOptions& options); // 2,3,7,8,9
std::vector<CheckResult> run_all(const CheckOptions& options);

std::string format_result_line(const CheckResult& r);

} // namespace checks
} // namespace dimer

#endif
