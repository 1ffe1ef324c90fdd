#include "pscomb/limits.hpp"

#include <cmath>
#include <limits>

#include "pscomb/quadrature.hpp"

namespace pscomb {

namespace {

void check_pq(double p, double q) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ExponentError("p must satisfy 1 < p < inf");
    if (!(q >= 1.0) || !std::isfinite(q)) throw ExponentError("q must satisfy q >= 1");
}

// 1 - (1 - x)^q for small x without cancellation.
double one_minus_pow(double x, double q) { return -std::expm1(q * std::log1p(-x)); }

}  // namespace

double singular_integral(double p, double q) {
    check_pq(p, q);
    const double a = p / (p - 1.0);
    // With s = 1 - tau^a the Jacobian a tau^{a-1} cancels the endpoint singularity:
    // the integrand becomes a ((1 - s^q) / (1 - s))^{-1/p}.
    auto g = [&](double tau) {
        if (tau <= 0.0) return a * std::pow(q, -1.0 / p);
        const double ta = std::pow(tau, a);
        if (ta >= 1.0) return a;
        return a * std::pow(one_minus_pow(ta, q) / ta, -1.0 / p);
    };
    return integrate_gauss(g, 0.0, 1.0, 1e-15);
}

double quadrature_cross_check(double p, double q) {
    check_pq(p, q);
    return integrate_tanh_sinh([&](double, double oms) { return std::pow(one_minus_pow(oms, q), -1.0 / p); }, 1e-15);
}

double c_pq_closed(double p, double q) {
    check_pq(p, q);
    thread_local double last_p = 0.0, last_q = 0.0, last_integral = 0.0;
    if (p != last_p || q != last_q) {
        last_integral = singular_integral(p, q);
        last_p = p;
        last_q = q;
    }
    const double integral = last_integral;
    return std::pow(p * q + p - q, 1.0 - p / q) * std::pow(p, p / q) / ((p - 1.0) * q) * std::pow(2.0 * integral, -p);
}

OneDimEigen interval_eigen_1d(double p, double q, int n) {
    check_pq(p, q);
    if (n < 16) throw ParameterError("interval_eigen_1d needs n >= 16");
    const double h = 1.0 / n;
    const int m = n - 1;  // interior nodes
    Eigen::VectorXd u(m);
    for (int i = 0; i < m; ++i) {
        const double x = (i + 1) * h;
        u(i) = std::min(x, 1.0 - x);
    }

    auto numer = [&](const Eigen::VectorXd& v) { return h * v.array().abs().pow(q).sum(); };
    auto energy = [&](const Eigen::VectorXd& v) {
        double s = std::pow(std::abs(v(0)), p) + std::pow(std::abs(v(m - 1)), p);
        for (int i = 0; i + 1 < m; ++i) s += std::pow(std::abs(v(i + 1) - v(i)), p);
        return std::pow(h, 1.0 - p) * s;
    };
    auto log_quotient = [&](const Eigen::VectorXd& v) { return (p / q) * std::log(numer(v)) - std::log(energy(v)); };
    auto gradient = [&](const Eigen::VectorXd& v) {
        const double nv = numer(v), ev = energy(v);
        Eigen::VectorXd g(m);
        auto flux = [&](double d) { return std::pow(std::abs(d), p - 2.0) * d; };
        for (int i = 0; i < m; ++i) {
            const double left = v(i) - (i > 0 ? v(i - 1) : 0.0);
            const double right = (i + 1 < m ? v(i + 1) : 0.0) - v(i);
            const double de = std::pow(h, 1.0 - p) * p * (flux(left) - flux(right));
            const double dn = h * q * std::pow(std::abs(v(i)), q - 1.0) * (v(i) >= 0.0 ? 1.0 : -1.0);
            g(i) = (p / q) * dn / nv - de / ev;
        }
        return g;
    };
    // Solve (1/h) tridiag(-1, 2, -1) x = g by the Thomas algorithm.
    auto precondition = [&](const Eigen::VectorXd& g) {
        Eigen::VectorXd c(m), d(m), x(m);
        c(0) = -0.5;
        d(0) = g(0) * h / 2.0;
        for (int i = 1; i < m; ++i) {
            const double denom = 2.0 + c(i - 1);
            c(i) = -1.0 / denom;
            d(i) = (g(i) * h + d(i - 1)) / denom;
        }
        x(m - 1) = d(m - 1);
        for (int i = m - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
        return x;
    };
    auto normalize = [&](Eigen::VectorXd& v) { v /= std::pow(numer(v), 1.0 / q); };

    normalize(u);
    double lq = log_quotient(u);
    double alpha = 1.0;
    int it = 0;
    int calm = 0;
    const int max_iter = 100000;
    for (; it < max_iter; ++it) {
        const Eigen::VectorXd g = gradient(u);
        const Eigen::VectorXd d = precondition(g);
        const double slope = g.dot(d);
        if (!(slope > 0.0)) break;
        alpha = std::min(alpha * 2.0, 1e6);
        Eigen::VectorXd trial;
        double lt = -std::numeric_limits<double>::infinity();
        bool accepted = false;
        while (alpha > 1e-30) {
            trial = u + alpha * d;
            lt = log_quotient(trial);
            if (std::isfinite(lt) && lt >= lq + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        normalize(trial);
        const double rel = std::expm1(lt - lq);
        u = std::move(trial);
        lq = lt;
        calm = rel < 1e-10 ? calm + 1 : 0;
        if (calm >= 3) break;
    }
    if (it >= max_iter) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n + 1);
        full.segment(1, m) = u;
        throw ConvergenceError("interval_eigen_1d did not converge", full);
    }
    OneDimEigen out;
    out.p = p;
    out.q = q;
    out.value = std::exp(lq);
    out.iterations = it;
    out.profile = Eigen::VectorXd::Zero(n + 1);
    out.profile.segment(1, m) = u.cwiseAbs();
    out.profile /= out.profile.maxCoeff();
    return out;
}

double integrate_domain(const Domain& domain, const std::function<double(const Point&)>& g, double h0,
                        double rel_tol) {
    auto midpoint = [&](double h) {
        double total = 0.0;
        for (const auto& r : domain.rects()) {
            const int nx = std::max(1, static_cast<int>(std::ceil(r.width() / h - 1e-9)));
            const int ny = std::max(1, static_cast<int>(std::ceil(r.height() / h - 1e-9)));
            const double hx = r.width() / nx, hy = r.height() / ny;
            double s = 0.0;
            for (int j = 0; j < ny; ++j)
                for (int i = 0; i < nx; ++i) s += g(r.lo + Point((i + 0.5) * hx, (j + 0.5) * hy));
            total += s * hx * hy;
        }
        return total;
    };
    double h = h0;
    double prev = midpoint(h);
    for (int level = 0; level < 14; ++level) {
        h *= 0.5;
        const double cur = midpoint(h);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

namespace {

double density_weight(const ProblemSpec& problem, double r, const Point& x) {
    const auto e = eigen_decompose<double>(problem.anisotropy(x));
    return std::pow(problem.forcing(x), r) / std::pow(e.a_max, r * problem.q() / 2.0);
}

}  // namespace

LimitPrediction optimal_density(const ProblemSpec& problem) {
    if (problem.exponents.regime == Regime::super)
        throw RegimeError("optimal density needs q <= p");
    const double p = problem.p(), q = problem.q();
    LimitPrediction out;
    out.r = p / (p * q + p - q);
    const double r = out.r;
    const ProblemSpec copy = problem;
    out.normalizer = integrate_domain(problem.domain, [&](const Point& x) { return density_weight(copy, r, x); },
                                      problem.h);
    out.constant = c_pq_closed(p, q) * std::pow(out.normalizer, p + p / q - 1.0);
    const double z = out.normalizer;
    out.density = [copy, r, z](const Point& x) { return density_weight(copy, r, x) / z; };
    out.orientation = [copy](const Point& x) { return eigen_decompose<double>(copy.anisotropy(x)).xi_max; };
    return out;
}

double limit_constant(const ProblemSpec& problem) { return optimal_density(problem).constant; }

namespace {

template <typename Fn>
void for_samples(const FittedSquare& fs, int k, Fn&& fn) {
    for (const auto& piece : fs.pieces) {
        const double hx = piece.width() / k, hy = piece.height() / k;
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < k; ++i) fn(Point(piece.lo + Point((i + 0.5) * hx, (j + 0.5) * hy)), hx * hy);
    }
}

}  // namespace

FittedVarifold fit_prediction(const ProblemSpec& problem, double t, int samples_per_side) {
    problem.exponents.require(Regime::sub);
    const double p = problem.p(), q = problem.q();
    const double s = p * q / (p - q);
    FittedVarifold fit;
    fit.t = t;
    fit.squares = lattice_squares(problem.domain, t);
    double z = 0.0;
    std::vector<double> raw(fit.squares.size());
    for (std::size_t i = 0; i < fit.squares.size(); ++i) {
        auto& fs = fit.squares[i];
        const Point xi = eigen_decompose<double>(problem.anisotropy(fs.square.center())).xi_max;
        fs.nu.atoms = {DirectionAtom{xi, 1.0}};
        double acc = 0.0;
        for_samples(fs, samples_per_side, [&](const Point& x, double w) {
            const double ia = std::sqrt(std::abs(xi.dot(problem.anisotropy(x) * xi)));
            acc += w * std::pow(problem.forcing(x), p / (p - q)) / std::pow(ia, s);
        });
        // Lagrange condition for min sum |Omega_i| a_i rho_i^{-s} at fixed mass.
        raw[i] = std::pow(acc / fs.domain_area, 1.0 / (1.0 + s));
        z += raw[i] * fs.domain_area;
    }
    for (std::size_t i = 0; i < fit.squares.size(); ++i) fit.squares[i].rho = raw[i] / z;
    return fit;
}

double F_infinity(const FittedVarifold& theta, const ProblemSpec& problem, int samples_per_side) {
    problem.exponents.require(Regime::sub);
    const double p = problem.p(), q = problem.q();
    const double s = p * q / (p - q);
    double integral = 0.0;
    for (const auto& fs : theta.squares) {
        if (fs.domain_area <= 0.0) continue;
        if (!(fs.rho > 0.0)) return std::numeric_limits<double>::infinity();
        for_samples(fs, samples_per_side, [&](const Point& x, double w) {
            const double ia = fs.nu.anisotropic_mean(problem.anisotropy(x));
            integral += w * std::pow(problem.forcing(x), p / (p - q)) / std::pow(fs.rho * ia, s);
        });
    }
    return c_pq_closed(p, q) * std::pow(integral, (p - q) / q);
}

double F_infinity_homogeneous(const FittedVarifold& theta, const ProblemSpec& problem, int samples_per_side) {
    problem.exponents.require(Regime::homogeneous);
    const double p = problem.p();
    double worst = 0.0;
    for (const auto& fs : theta.squares) {
        if (fs.domain_area <= 0.0) continue;
        if (!(fs.rho > 0.0)) return std::numeric_limits<double>::infinity();
        for_samples(fs, samples_per_side, [&](const Point& x, double) {
            const double ia = fs.nu.anisotropic_mean(problem.anisotropy(x));
            worst = std::max(worst, problem.forcing(x) / std::pow(fs.rho * ia, p));
        });
    }
    return c_pq_closed(p, p) * worst;
}

}  // namespace pscomb
