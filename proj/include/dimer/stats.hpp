#ifndef DIMER_STATS_HPP
#define DIMER_STATS_HPP

#include <cstdint>
#include <vector>

namespace dimer {

struct SampleMoments {
    size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;        // unbiased
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

SampleMoments sample_moments(const std::vector<double>& xs);

struct CovarianceEstimate {
    double covariance = 0.0;      // unbiased sample covariance
    double standard_error = 0.0;  // leave-one-out jackknife
    size_t count = 0;
};

CovarianceEstimate covariance_jackknife(const std::vector<double>& xs,
                                        const std::vector<double>& ys);

// Regularized incomplete gamma functions P(a, x), Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper-tail p-value of a chi-square statistic with `df` degrees of freedom.
double chi_square_pvalue(double statistic, int df);

struct ChiSquareTest {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
};

// Goodness of fit of observed counts against uniform expectation.
ChiSquareTest chi_square_uniform(const std::vector<int64_t>& counts);

// Two-sample homogeneity chi-square over shared categories.
ChiSquareTest chi_square_two_sample(const std::vector<int64_t>& a, const std::vector<int64_t>& b);

// Two-sample Kolmogorov-Smirnov sup-distance (inputs need not be sorted).
double ks_distance(std::vector<double> a, std::vector<double> b);

} // namespace dimer

#endif
