#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pscomb/bounds.hpp"
#include "pscomb/limits.hpp"
#include "pscomb/solver.hpp"

using namespace pscomb;

namespace {

ProblemSpec make_problem(double p, double q, double h, Domain d = Domain::unit_square()) {
    ProblemSpec s;
    s.exponents = ExponentPair::make(p, q);
    s.h = h;
    s.domain = std::move(d);
    return s;
}

}  // namespace

TEST(LowerBound, DeltaSolvesQuadratic) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 5);
    for (int k = 0; k < 50; ++k) {
        const double len = u(rng), area = u(rng), det = u(rng);
        const int n = 1 + k % 4;
        const auto r = lower_bound(len, n, area, det, 2, 1);
        const double d = r.inputs.at("delta");
        EXPECT_NEAR(2 * len * d + n * M_PI * std::sqrt(det) * d * d, area, 1e-9 * area);
        EXPECT_GT(r.value, 0.0);
    }
}

TEST(LowerBound, ZeroLengthIsVacuous) {
    const auto r = lower_bound(0.0, 1, 1.0, 1.0, 2, 2);
    EXPECT_TRUE(r.vacuous);
    EXPECT_EQ(r.value, 0.0);
    EXPECT_NEAR(r.inputs.at("delta"), 1.0 / std::sqrt(M_PI), 1e-15);
}

TEST(LowerBound, BelowTwoSidedSolve) {
    const auto r = lower_bound(2.0, 2, 1.0, 1.0, 2, 2);
    const SegmentSet sides({Segment{Point(0, 0), Point(0, 1)}, Segment{Point(1, 0), Point(1, 1)}});
    const double c = solve(make_problem(2, 2, 1.0 / 32), sides).C;
    EXPECT_LE(r.value, c * 1.02);
    EXPECT_LE(r.value, 1.0 / (M_PI * M_PI) * 1.02);
}

TEST(TrapezoidUpper, RectangleLimit) {
    const Eigen::Matrix2d a = Eigen::Vector2d(4, 1).asDiagonal();
    const auto r = trapezoid_upper(0.5, 0.5, 0.0, 0.0, Point(1, 0), a, 2, 1);
    EXPECT_NEAR(r.value, c_pq_closed(2, 1) * 0.5 * std::pow(0.5 / 2.0, 2), 1e-15);
}

TEST(TrapezoidUpper, FormsAgreeForIdentity) {
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    const auto a = trapezoid_upper(0.3, 0.2, 0.1, 0.4, Point(0.6, 0.8), id, 3, 2, TrapezoidForm::proof);
    const auto b = trapezoid_upper(0.3, 0.2, 0.1, 0.4, Point(0.6, 0.8), id, 3, 2, TrapezoidForm::statement);
    EXPECT_DOUBLE_EQ(a.value, b.value);
    const Eigen::Matrix2d an = Eigen::Vector2d(4, 1).asDiagonal();
    EXPECT_NE(trapezoid_upper(0.3, 0.2, 0.1, 0.4, Point(1, 0), an, 3, 2, TrapezoidForm::proof).value,
              trapezoid_upper(0.3, 0.2, 0.1, 0.4, Point(1, 0), an, 3, 2, TrapezoidForm::statement).value);
    EXPECT_THROW(trapezoid_upper(0.3, 0.0, 0.1, 0.4, Point(1, 0), id, 3, 2), ParameterError);
}

TEST(TrapezoidUpper, ThinStripAboveSolve) {
    // 1 x 0.125 strip, Dirichlet data on the two long sides.
    const Domain strip = Domain::rectangle(1, 0.125);
    const SegmentSet long_sides({Segment{Point(0, 0), Point(1, 0)}, Segment{Point(0, 0.125), Point(1, 0.125)}});
    const double c = solve(make_problem(2, 1, 1.0 / 256, strip), long_sides).C;
    const double bound = trapezoid_upper(0.125, 0.125, 0, 0, Point(0, 1), Eigen::Matrix2d::Identity(), 2, 1).value;
    EXPECT_NEAR(bound, (1.0 / 12.0) * 0.125 * 0.125 * 0.125, 1e-15);
    EXPECT_GE(bound * 1.03, c);
}

TEST(RectangleExact, Examples) {
    EXPECT_NEAR(rectangle_exact(1, 1, 2, 2), 1.0 / (M_PI * M_PI), 1e-12);
    EXPECT_NEAR(rectangle_exact(1, 1, 2, 1), 1.0 / 12.0, 1e-12);
    EXPECT_NEAR(rectangle_exact(2, 1, 2, 1), 2.0 / 12.0, 1e-12);
}

TEST(Enclosure, SquareWithFullBoundary) {
    const std::vector<Point> sq{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
    const auto r = enclosure_upper(sq, Point(1, 0), Eigen::Matrix2d::Identity(), 2, 2);
    EXPECT_NEAR(r.value, 1.0 / (M_PI * M_PI), 1e-12);
    EXPECT_THROW(enclosure_upper({Point(0, 0), Point(1, 0)}, Point(1, 0), Eigen::Matrix2d::Identity(), 2, 2),
                 ParameterError);
}

TEST(Combine, Examples) {
    EXPECT_NEAR(combine_disconnected({0.3}, 2, 1), 0.3, 1e-15);
    EXPECT_NEAR(combine_disconnected({0.3, 0.3}, 3, 2), std::pow(2.0, 0.5) * 0.3, 1e-14);
    EXPECT_THROW(combine_disconnected({0.3, 0.3}, 2, 2), RegimeError);
    EXPECT_DOUBLE_EQ(combine_homogeneous({0.4}), 0.4);
    EXPECT_DOUBLE_EQ(combine_homogeneous({0.4, 0.4}), 0.4);
    EXPECT_DOUBLE_EQ(combine_homogeneous({0.1, 0.4, 0.2}), 0.4);
}

TEST(Combine, MonotoneInEachValue) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.01, 1);
    for (int k = 0; k < 100; ++k) {
        std::vector<double> v{u(rng), u(rng), u(rng)};
        const double base = combine_disconnected(v, 3, 2);
        EXPECT_GE(base, *std::max_element(v.begin(), v.end()));
        v[k % 3] *= 1.1;
        EXPECT_GT(combine_disconnected(v, 3, 2), base);
    }
}

TEST(Combine, TwoSquaresMatchUnionSolve) {
    const Domain two = Domain::rectangle(2, 1);
    SegmentSet sigma(two.boundary());
    sigma.push_back(Segment{Point(1, 0), Point(1, 1)});
    const double h = 1.0 / 32;
    const double one = solve(make_problem(2, 1, h), SegmentSet(Domain::unit_square().boundary())).C;
    const double uni = solve(make_problem(2, 1, h, two), sigma).C;
    EXPECT_NEAR(uni / combine_disconnected({one, one}, 2, 1), 1.0, 0.02);
}

TEST(Combine, HomogeneousUnionIsMax) {
    const Domain d = Domain::rectangle(1.5, 1);
    SegmentSet sigma(d.boundary());
    sigma.push_back(Segment{Point(1, 0), Point(1, 1)});
    const double h = 1.0 / 32;
    const double big = solve(make_problem(2, 2, h), SegmentSet(Domain::unit_square().boundary())).C;
    const Domain half = Domain::rectangle(0.5, 1);
    const double small = solve(make_problem(2, 2, h, half), SegmentSet(half.boundary())).C;
    const double uni = solve(make_problem(2, 2, h, d), sigma).C;
    EXPECT_NEAR(uni / combine_homogeneous({big, small}), 1.0, 0.02);
}

TEST(AsymptoticUpper, Examples) {
    const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    EXPECT_NEAR(asymptotic_upper_comb(1, {{Point(0.6, 0.8), 1.0}}, id, 2, 1), 1.0 / 12.0, 1e-12);
    const Eigen::Matrix2d a = Eigen::Vector2d(4, 1).asDiagonal();
    EXPECT_NEAR(asymptotic_upper_comb(1, {{Point(1, 0), 1.0}}, a, 2, 2), 1.0 / (4 * M_PI * M_PI), 1e-12);
    EXPECT_NEAR(asymptotic_upper_comb(4, {{Point(1, 0), 1.0}}, id, 2, 1), 64.0 / 12.0, 1e-10);
}

TEST(ScalingFit, Synthetic) {
    std::vector<std::pair<double, double>> a, b;
    for (double L : {1.0, 2.0, 4.0, 8.0}) {
        a.emplace_back(L, std::pow(L, -2.0));
        b.emplace_back(L, 3 * std::pow(L, -2.5));
    }
    EXPECT_NEAR(fit_scaling_exponent(a), 2.0, 1e-9);
    EXPECT_NEAR(fit_scaling_exponent(b), 2.5, 1e-9);
    EXPECT_THROW(fit_scaling_exponent({{1.0, 1.0}}), ParameterError);
}

TEST(CombUpper, CellsOfCombBoundSolve) {
    Square q;
    q.lo = Point(0, 0);
    const Comb c = build_comb(q, {{Point(0, 1), 1.0}}, Eigen::Matrix2d::Identity(), 30.0, true);
    const auto r = comb_upper(c.cells, Eigen::Matrix2d::Identity(), 2, 1);
    EXPECT_GT(r.value, 0.0);
    EXPECT_EQ(r.kind, BoundKind::combined);
    ProblemSpec s = make_problem(2, 1, 1.0 / 256);
    const double sol = solve(s, c.sigma).C;
    EXPECT_GE(r.value * 1.03, sol);
    EXPECT_THROW(comb_upper({}, Eigen::Matrix2d::Identity(), 2, 1), ParameterError);
}
