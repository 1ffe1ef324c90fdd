#pragma once

#include <functional>
#include <vector>

namespace pscomb {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Adaptive composite Gauss-Legendre (20 vs 30 points per panel, bisection).
double integrate_gauss(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-15);

/// Tanh-sinh rule for integrands on (0, 1) singular at s = 1. The integrand
/// receives both s and 1 - s, the latter computed without cancellation.
double integrate_tanh_sinh(const std::function<double(double s, double one_minus_s)>& f, double rel_tol = 1e-14);

}  // namespace pscomb
