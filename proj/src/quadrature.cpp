#include "dimer/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace dimer {

static GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

const GaussLegendreRule& gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

double integrate_gl_2d(const std::function<double(double, double)>& f, double a, double b,
                       double c, double d, int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    const double mx = 0.5 * (a + b), hx = 0.5 * (b - a);
    const double my = 0.5 * (c + d), hy = 0.5 * (d - c);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = mx + hx * rule.nodes[i];
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += rule.weights[j] * f(x, my + hy * rule.nodes[j]);
        sum += rule.weights[i] * row;
    }
    return sum * hx * hy;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  int order, double abs_tol, int max_level) {
    auto composite = [&](int panels) {
        double sum = 0.0;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) sum += integrate_gl(f, a + p * h, a + (p + 1) * h, order);
        return sum;
    };
    double prev = composite(1);
    AdaptiveResult res{prev, std::fabs(prev)};
    int panels = 2;
    for (int level = 0; level < max_level; ++level, panels *= 2) {
        double cur = composite(panels);
        res.value = cur;
        res.error_estimate = std::fabs(cur - prev);
        if (res.error_estimate < abs_tol) return res;
        prev = cur;
    }
    return res;
}

} // namespace dimer
