#include "dimer/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dimer/common.hpp"

namespace dimer {

SampleMoments sample_moments(const std::vector<double>& xs) {
    SampleMoments m;
    m.count = xs.size();
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / double(xs.size());
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = double(xs.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = xs.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
    if (m2 > 0.0) {
        m.skewness = m3 / std::pow(m2, 1.5);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

CovarianceEstimate covariance_jackknife(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    CovarianceEstimate est;
    if (xs.size() != ys.size()) throw Error(ErrorKind::Shape, "covariance: length mismatch");
    const size_t n = xs.size();
    est.count = n;
    if (n < 2) return est;
    double sx = 0, sy = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxy += xs[i] * ys[i];
    }
    const double dn = double(n);
    est.covariance = (sxy - sx * sy / dn) / (dn - 1.0);
    // leave-one-out estimates from the same running sums
    std::vector<double> loo(n);
    for (size_t i = 0; i < n; ++i) {
        const double sxi = sx - xs[i], syi = sy - ys[i], sxyi = sxy - xs[i] * ys[i];
        loo[i] = (sxyi - sxi * syi / (dn - 1.0)) / (dn - 2.0);
    }
    double lm = 0;
    for (double v : loo) lm += v;
    lm /= dn;
    double ss = 0;
    for (double v : loo) ss += (v - lm) * (v - lm);
    est.standard_error = std::sqrt((dn - 1.0) / dn * ss);
    return est;
}

// Incomplete gamma by series (x < a+1) and continued fraction (x >= a+1).
static double gamma_p_series(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error(ErrorKind::Contract, "gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error(ErrorKind::Contract, "gamma_q: bad arguments");
    if (x == 0.0) return 1.0;
    return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi_square_pvalue(double statistic, int df) {
    if (df <= 0) throw Error(ErrorKind::Contract, "chi_square_pvalue: df must be positive");
    if (statistic <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * statistic);
}

ChiSquareTest chi_square_uniform(const std::vector<int64_t>& counts) {
    ChiSquareTest t;
    if (counts.size() < 2) throw Error(ErrorKind::Contract, "chi_square_uniform: need >= 2 bins");
    int64_t total = 0;
    for (int64_t c : counts) total += c;
    const double expected = double(total) / double(counts.size());
    if (expected <= 0.0) throw Error(ErrorKind::Contract, "chi_square_uniform: empty sample");
    for (int64_t c : counts) {
        const double d = double(c) - expected;
        t.statistic += d * d / expected;
    }
    t.df = int(counts.size()) - 1;
    t.p_value = chi_square_pvalue(t.statistic, t.df);
    return t;
}

ChiSquareTest chi_square_two_sample(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    if (a.size() != b.size() || a.size() < 2)
        throw Error(ErrorKind::Shape, "chi_square_two_sample: bin mismatch");
    ChiSquareTest t;
    double na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        na += double(a[i]);
        nb += double(b[i]);
    }
    if (na <= 0 || nb <= 0) throw Error(ErrorKind::Contract, "chi_square_two_sample: empty sample");
    const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
    int used = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double tot = double(a[i] + b[i]);
        if (tot == 0) continue;
        const double d = ka * double(a[i]) - kb * double(b[i]);
        t.statistic += d * d / tot;
        ++used;
    }
    t.df = used - 1;
    t.p_value = t.df > 0 ? chi_square_pvalue(t.statistic, t.df) : 1.0;
    return t;
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorKind::Contract, "ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double va = a[i], vb = b[j];
        if (va <= vb) ++i;
        if (vb <= va) ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

} // namespace dimer
