#ifndef DIMER_QUADRATURE_HPP
#define DIMER_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace dimer {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

// Cached Gauss-Legendre rule of the given order.
const GaussLegendreRule& gauss_legendre(int n);

// \int_a^b f
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// \int_a^b \int_c^d f(x, y), tensor rule
double integrate_gl_2d(const std::function<double(double, double)>& f, double a, double b,
                       double c, double d, int n);

// Doubles the panel count until two successive composite estimates agree to
// abs_tol (or max_level is hit).  Returns {value, last difference}.
struct AdaptiveResult {
    double value = 0.0;
    double error_estimate = 0.0;
};
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  int order, double abs_tol, int max_level = 12);

} // namespace dimer

#endif
