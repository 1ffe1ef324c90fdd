#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pscomb/limits.hpp"
#include "pscomb/quadrature.hpp"

using namespace pscomb;

namespace {

ProblemSpec make_problem(double p, double q) {
    ProblemSpec s;
    s.exponents = ExponentPair::make(p, q);
    return s;
}

}  // namespace

TEST(Quadrature, GaussLegendreExactness) {
    const GaussRule g = gauss_legendre(10);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * std::pow(g.nodes[i], 18);
    EXPECT_NEAR(sum, 2.0 / 19.0, 1e-15);
    EXPECT_NEAR(integrate_gauss([](double x) { return std::exp(x); }, 0, 1), std::exp(1.0) - 1.0, 1e-14);
}

TEST(Closed, KnownValues) {
    EXPECT_NEAR(c_pq_closed(2, 2) * M_PI * M_PI, 1.0, 1e-9);
    EXPECT_NEAR(c_pq_closed(2, 1) * 12.0, 1.0, 1e-9);
}

TEST(Closed, CrossCheckAgrees) {
    for (auto [p, q] : {std::pair{2.0, 2.0}, {2.0, 1.0}, {3.0, 2.0}, {4.0, 1.5}, {1.5, 1.0}, {3.0, 3.0}}) {
        const double a = singular_integral(p, q);
        const double b = quadrature_cross_check(p, q);
        EXPECT_NEAR(a / b, 1.0, 1e-10) << p << "," << q;
    }
}

TEST(Closed, RejectsBadExponents) {
    EXPECT_THROW(c_pq_closed(1.0, 1.0), ExponentError);
    EXPECT_THROW(c_pq_closed(2.0, 0.5), ExponentError);
}

TEST(IntervalOracle, MatchesClosedForm) {
    for (auto [p, q] : {std::pair{2.0, 2.0}, {2.0, 1.0}, {3.0, 2.0}, {3.0, 3.0}, {4.0, 2.0}}) {
        const OneDimEigen e = interval_eigen_1d(p, q, 2048);
        EXPECT_NEAR(e.value / c_pq_closed(p, q), 1.0, 5e-3) << p << "," << q;
    }
}

TEST(IntervalOracle, ProfileShape) {
    const OneDimEigen e = interval_eigen_1d(3, 2, 512);
    const int n = static_cast<int>(e.profile.size()) - 1;
    EXPECT_NEAR(e.profile.maxCoeff(), 1.0, 1e-12);
    EXPECT_NEAR(e.profile(0), 0.0, 1e-15);
    EXPECT_NEAR(e.profile(n), 0.0, 1e-15);
    for (int i = 0; i <= n; ++i) EXPECT_NEAR(e.profile(i), e.profile(n - i), 1e-6);
    for (int i = 0; i < n / 2; ++i) EXPECT_LE(e.profile(i), e.profile(i + 1) + 1e-12);
}

TEST(OptimalDensity, UniformSquare) {
    const auto pred = optimal_density(make_problem(2, 1));
    EXPECT_NEAR(pred.r, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(pred.normalizer, 1.0, 1e-12);
    EXPECT_NEAR(pred.density(Point(0.3, 0.7)), 1.0, 1e-12);
}

TEST(OptimalDensity, AffineForcing) {
    ProblemSpec s = make_problem(2, 1);
    s.forcing = ForcingField::affine(1.0, Point(1, 0));
    const auto pred = optimal_density(s);
    EXPECT_NEAR(pred.normalizer, 0.6 * (std::pow(2.0, 5.0 / 3.0) - 1.0), 1e-8);
    EXPECT_NEAR(pred.density(Point(1, 0.5)) / pred.density(Point(0, 0.5)), std::pow(2.0, 2.0 / 3.0), 1e-12);
}

TEST(OptimalDensity, OrientationFollowsLargestEigenvector) {
    ProblemSpec s = make_problem(2, 1);
    s.anisotropy = AnisotropyField::diagonal(4, 1);
    const Point xi = optimal_density(s).orientation(Point(0.5, 0.5));
    EXPECT_NEAR(std::abs(xi.x()), 1.0, 1e-14);
}

TEST(LimitConstant, Examples) {
    EXPECT_NEAR(limit_constant(make_problem(2, 1)), 1.0 / 12.0, 1e-12);
    ProblemSpec big = make_problem(2, 1);
    big.domain = Domain::rectangle(2, 2);
    big.h = 1.0 / 32;
    EXPECT_NEAR(limit_constant(big), 16.0 / 3.0, 1e-10);
    ProblemSpec an = make_problem(2, 1);
    an.anisotropy = AnisotropyField::diagonal(4, 1);
    EXPECT_NEAR(limit_constant(an), (1.0 / 12.0) / 4.0, 1e-12);
    EXPECT_THROW(limit_constant(make_problem(2, 3)), RegimeError);
}

TEST(FInfinity, PredictionAttainsLimit) {
    for (auto [p, q] : {std::pair{2.0, 1.0}, {3.0, 2.0}}) {
        ProblemSpec s = make_problem(p, q);
        s.forcing = ForcingField::affine(1.0, Point(0.5, 0.25));
        Eigen::Matrix2d a;
        a << 2, 0.2, 0.2, 1;
        s.anisotropy = AnisotropyField::constant(a);
        const int k = 2;
        const FittedVarifold fit = fit_prediction(s, 1.0 / 256, k);
        EXPECT_NEAR(fit.normalization(), 1.0, 1e-12);
        EXPECT_NEAR(F_infinity(fit, s, k) / limit_constant(s), 1.0, 1e-6) << p << "," << q;
    }
}

TEST(FInfinity, VariableAnisotropyConverges) {
    ProblemSpec s = make_problem(2, 1);
    s.anisotropy = AnisotropyField::affine({2, 0.2, 1}, {0.5, 0, 0}, {0, 0, 0.3});
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {0.5, 0.25, 0.125}) {
        const double gap = std::abs(F_infinity(fit_prediction(s, t, 4), s, 4) / limit_constant(s) - 1.0);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(FInfinity, ConstantDataGivesClosedForm) {
    const ProblemSpec s = make_problem(2, 1);
    const FittedVarifold fit = fit_prediction(s, 0.5, 1);
    EXPECT_NEAR(F_infinity(fit, s, 1), c_pq_closed(2, 1), 1e-12);
}

TEST(FInfinity, EmptySquareIsInfinite) {
    const ProblemSpec s = make_problem(2, 1);
    FittedVarifold fit = fit_prediction(s, 0.5, 1);
    fit.squares[0].rho = 0.0;
    fit.squares[0].nu.atoms.clear();
    fit.squares[1].rho *= 2.0;
    EXPECT_EQ(F_infinity(fit, s, 1), std::numeric_limits<double>::infinity());
}

TEST(FInfinity, PerturbationsNeverBeatPrediction) {
    ProblemSpec s = make_problem(2, 1);
    s.forcing = ForcingField::affine(1.0, Point(1, 0));
    s.anisotropy = AnisotropyField::diagonal(3, 1);
    const int k = 4;
    const FittedVarifold best = fit_prediction(s, 0.25, k);
    const double f0 = F_infinity(best, s, k);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        FittedVarifold pert = best;
        double mass = 0.0;
        for (auto& sq : pert.squares) {
            sq.rho *= 0.5 + u(rng);
            if (trial % 2 == 0) {
                const double w = 0.5 * u(rng);
                sq.nu.atoms[0].weight = 1.0 - w;
                sq.nu.atoms.push_back({direction_from_angle(M_PI * u(rng)), w});
            }
            mass += sq.rho * sq.domain_area;
        }
        for (auto& sq : pert.squares) sq.rho /= mass;
        if (F_infinity(pert, s, k) < f0 * (1.0 - 1e-9)) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(FInfinity, BestOrientationIsLargestEigenvector) {
    ProblemSpec s = make_problem(2, 1);
    s.anisotropy = AnisotropyField::diagonal(4, 1);
    FittedVarifold fit = fit_prediction(s, 1.0, 1);
    const double best = F_infinity(fit, s, 1);
    for (double angle = 0.1; angle < M_PI; angle += 0.3) {
        fit.squares[0].nu.atoms = {{direction_from_angle(angle), 1.0}};
        EXPECT_GT(F_infinity(fit, s, 1), best);
    }
}

TEST(FInfinityHomogeneous, ClosedFormAndDensityScaling) {
    const ProblemSpec s = make_problem(2, 2);
    FittedVarifold fit;
    fit.squares = lattice_squares(s.domain, 1.0);
    for (auto& sq : fit.squares) {
        sq.rho = 1.0;
        sq.nu.atoms = {{Point(0, 1), 1.0}};
    }
    const double base = F_infinity_homogeneous(fit, s, 4);
    EXPECT_NEAR(base, c_pq_closed(2, 2), 1e-12);
    for (auto& sq : fit.squares) sq.rho *= 0.5;
    EXPECT_NEAR(F_infinity_homogeneous(fit, s, 4), 4.0 * base, 1e-12);
}

TEST(IntegrateDomain, LShape) {
    const Domain l({Rect{Point(0, 0), Point(2, 1)}, Rect{Point(0, 1), Point(1, 2)}});
    EXPECT_NEAR(integrate_domain(l, [](const Point& x) { return x.x(); }, 0.5), 2.0 + 0.5, 1e-10);
}
