#include "pscomb/quadrature.hpp"

#include <cmath>
#include <map>

#include "pscomb/errors.hpp"

namespace pscomb {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw ParameterError("Gauss-Legendre needs n >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

namespace {

double panel(const GaussRule& r, const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(c + h * r.nodes[i]);
    return s * h;
}

double adapt(const GaussRule& lo, const GaussRule& hi, const std::function<double(double)>& f, double a, double b,
             double tol, double coarse, int depth) {
    const double fine = panel(hi, f, a, b);
    if (std::abs(fine - coarse) <= tol || depth >= 60) return fine;
    const double m = 0.5 * (a + b);
    return adapt(lo, hi, f, a, m, 0.5 * tol, panel(lo, f, a, m), depth + 1) +
           adapt(lo, hi, f, m, b, 0.5 * tol, panel(lo, f, m, b), depth + 1);
}

}  // namespace

double integrate_gauss(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    static const GaussRule lo = gauss_legendre(20);
    static const GaussRule hi = gauss_legendre(30);
    return adapt(lo, hi, f, a, b, abs_tol, panel(lo, f, a, b), 0);
}

double integrate_tanh_sinh(const std::function<double(double, double)>& f, double rel_tol) {
    const double tmax = 4.0;
    auto term = [&](double t) {
        const double u = 0.5 * M_PI * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(u));
        // s = 1 / (1 + exp(-2u)), 1 - s = 1 / (1 + exp(2u)).
        const double small = e / (1.0 + e), big = 1.0 / (1.0 + e);
        const double s = u >= 0.0 ? big : small;
        const double oms = u >= 0.0 ? small : big;
        if (s <= 0.0 || oms <= 0.0) return 0.0;
        const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
        const double w = 0.25 * M_PI * std::cosh(t) * sech2;
        return w * f(s, oms);
    };
    double h = 0.5;
    double sum = term(0.0);
    for (double t = h; t <= tmax; t += h) sum += term(t) + term(-t);
    double prev = sum * h;
    for (int level = 0; level < 12; ++level) {
        h *= 0.5;
        for (double t = h; t <= tmax; t += 2.0 * h) sum += term(t) + term(-t);
        const double cur = sum * h;
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) && level >= 2) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace pscomb
