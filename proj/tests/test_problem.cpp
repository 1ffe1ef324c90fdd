#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pscomb/problem.hpp"
#include "pscomb/problem_io.hpp"

using namespace pscomb;

TEST(ExponentPair, RegimeTags) {
    EXPECT_EQ(ExponentPair::make(2, 1).regime, Regime::sub);
    EXPECT_EQ(ExponentPair::make(2, 2).regime, Regime::homogeneous);
    EXPECT_EQ(ExponentPair::make(2, 3).regime, Regime::super);
    EXPECT_THROW(ExponentPair::make(1.0, 1.0), ExponentError);
    EXPECT_THROW(ExponentPair::make(2.0, 0.5), ExponentError);
    EXPECT_THROW(ExponentPair::make(2, 2).require(Regime::sub), RegimeError);
    EXPECT_DOUBLE_EQ(ExponentPair::make(3, 2).scaling_exponent(), 4.0);
}

TEST(EigenDecompose, Identity) {
    const auto e = eigen_decompose<double>(Eigen::Matrix2d::Identity());
    EXPECT_DOUBLE_EQ(e.a_min, 1.0);
    EXPECT_DOUBLE_EQ(e.a_max, 1.0);
    EXPECT_DOUBLE_EQ(e.xi_max.x(), 1.0);
    EXPECT_DOUBLE_EQ(e.xi_max.y(), 0.0);
}

TEST(EigenDecompose, Diagonal) {
    const auto e = eigen_decompose<double>(Eigen::Vector2d(4, 1).asDiagonal().toDenseMatrix());
    EXPECT_NEAR(e.a_min, 1.0, 1e-14);
    EXPECT_NEAR(e.a_max, 4.0, 1e-14);
    EXPECT_NEAR(e.xi_max.x(), 1.0, 1e-14);
    EXPECT_NEAR(e.xi_max.y(), 0.0, 1e-14);
}

TEST(EigenDecompose, OffDiagonal) {
    Eigen::Matrix2d a;
    a << 2, 1, 1, 2;
    const auto e = eigen_decompose<double>(a);
    EXPECT_NEAR(e.a_min, 1.0, 1e-14);
    EXPECT_NEAR(e.a_max, 3.0, 1e-14);
    EXPECT_NEAR(e.xi_max.x(), 1 / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(e.xi_max.y(), 1 / std::sqrt(2.0), 1e-14);
    EXPECT_LT((a * e.xi_max - e.a_max * e.xi_max).norm(), 1e-12);
}

TEST(EigenDecompose, RejectsIndefinite) {
    Eigen::Matrix2d a;
    a << 1, 2, 2, 1;
    EXPECT_THROW(eigen_decompose<double>(a), DefinitenessError);
}

TEST(EigenDecompose, ReassemblyRandom) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 200; ++k) {
        Eigen::Matrix2d b;
        b << u(rng), u(rng), u(rng), u(rng);
        const Eigen::Matrix2d a = b * b.transpose() + 0.1 * Eigen::Matrix2d::Identity();
        const auto e = eigen_decompose<double>(a);
        ASSERT_LE(e.a_min, e.a_max);
        ASSERT_GE(e.xi_max.x(), 0.0);
        const Eigen::Matrix2d proj = e.xi_max * e.xi_max.transpose();
        const Eigen::Matrix2d back = e.a_min * (Eigen::Matrix2d::Identity() - proj) + e.a_max * proj;
        ASSERT_LT((back - a).norm(), 1e-10);
    }
}

TEST(Ellipticity, ConstantFields) {
    const auto id = check_ellipticity(AnisotropyField::identity(), Domain::unit_square(), 16);
    EXPECT_DOUBLE_EQ(id.kappa0, 1.0);
    EXPECT_DOUBLE_EQ(id.kappa1, 1.0);
    const auto d = check_ellipticity(AnisotropyField::diagonal(4, 1), Domain::unit_square(), 16);
    EXPECT_NEAR(d.kappa0, 1.0, 1e-14);
    EXPECT_NEAR(d.kappa1, 4.0, 1e-14);
}

TEST(Ellipticity, AffineFieldAndMonotoneRefinement) {
    const auto field = AnisotropyField::affine({1, 0, 1}, {1, 0, 0}, {0, 0, 0});  // diag(1 + x, 1)
    const auto coarse = check_ellipticity(field, Domain::unit_square(), 8);
    const auto fine = check_ellipticity(field, Domain::unit_square(), 4096);
    EXPECT_NEAR(fine.kappa0, 1.0, 1e-12);
    EXPECT_NEAR(fine.kappa1, 2.0, 1e-12);
    EXPECT_LE(fine.kappa0, coarse.kappa0);
    EXPECT_GE(fine.kappa1, coarse.kappa1);
}

TEST(Ellipticity, ReportsOffendingPoint) {
    const auto field = AnisotropyField::affine({1, 0, 1}, {-2, 0, 0}, {0, 0, 0});  // a11 < 0 for x > 1/2
    EXPECT_THROW(check_ellipticity(field, Domain::unit_square(), 64), DefinitenessError);
}

TEST(Forcing, RejectsNonPositive) {
    EXPECT_THROW(check_forcing(ForcingField::affine(1.0, Point(-2, 0)), Domain::unit_square(), 64), ParameterError);
    EXPECT_DOUBLE_EQ(check_forcing(ForcingField::constant(2.0), Domain::unit_square(), 4), 2.0);
}

TEST(Domain, Validation) {
    EXPECT_THROW(Domain({Rect{Point(0, 0), Point(1, 1)}, Rect{Point(2, 0), Point(3, 1)}}), GeometryError);
    EXPECT_THROW(Domain({Rect{Point(0, 0), Point(1, 1)}, Rect{Point(0.5, 0), Point(2, 1)}}), GeometryError);
    const Domain l({Rect{Point(0, 0), Point(2, 1)}, Rect{Point(0, 1), Point(1, 2)}});
    EXPECT_DOUBLE_EQ(l.area(), 3.0);
    double len = 0.0;
    for (const auto& s : l.boundary()) len += s.length();
    EXPECT_DOUBLE_EQ(len, 8.0);
}

TEST(Grid, UnitSquareQuarter) {
    const Grid g = build_grid(Domain::unit_square(), 0.25);
    EXPECT_EQ(g.node_count(), 25);
    EXPECT_EQ(g.cell_count(), 16);
    double w = 0.0;
    for (int i = 0; i < g.node_count(); ++i) w += g.node_weight(i);
    EXPECT_NEAR(w, 1.0, 1e-14);
}

TEST(Grid, MisalignedSpacing) {
    EXPECT_THROW(build_grid(Domain::unit_square(), 0.3), GridAlignmentError);
}

TEST(Grid, LShape) {
    const Domain l({Rect{Point(0, 0), Point(1, 1)}, Rect{Point(1, 0), Point(2, 1)}, Rect{Point(0, 1), Point(1, 2)}});
    const Grid g = build_grid(l, 0.5);
    EXPECT_EQ(g.node_count(), 21);
    EXPECT_EQ(g.cell_count(), 12);
    for (const auto& x : g.nodes()) EXPECT_TRUE(l.contains(x));
}

TEST(ProblemIo, ParsesAllFieldKinds) {
    const auto j = nlohmann::json::parse(R"({
        "p": 3, "q": 2, "domain": [[0, 0, 2, 1]], "h": 0.125,
        "anisotropy": {"kind": "radial_bump", "base": [1, 0, 1], "amplitude": [1, 0, 0],
                       "center": [1, 0.5], "radius": 0.5},
        "forcing": {"kind": "affine", "value": 1.0, "gradient": [0.5, 0]}
    })");
    const ProblemSpec spec = problem_from_json(j);
    EXPECT_DOUBLE_EQ(spec.p(), 3.0);
    EXPECT_DOUBLE_EQ(spec.q(), 2.0);
    EXPECT_DOUBLE_EQ(spec.domain.area(), 2.0);
    EXPECT_DOUBLE_EQ(spec.h, 0.125);
    EXPECT_NEAR(spec.anisotropy(Point(1, 0.5))(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(spec.forcing(Point(2, 0)), 2.0, 1e-14);
    EXPECT_FALSE(spec.anisotropy.is_constant());
}

TEST(ProblemIo, GridSamplesAndErrors) {
    const auto j = nlohmann::json::parse(R"({
        "p": 2, "q": 1, "domain": [[0, 0, 1, 1]],
        "anisotropy": {"kind": "grid_samples", "origin": [0, 0], "spacing": 1, "nx": 2, "ny": 2,
                       "values": [[1, 0, 1], [3, 0, 1], [1, 0, 1], [3, 0, 1]]},
        "forcing": {"kind": "grid_samples", "origin": [0, 0], "spacing": 1, "nx": 2, "ny": 2,
                    "values": [1, 1, 2, 2]}
    })");
    const ProblemSpec spec = problem_from_json(j);
    EXPECT_NEAR(spec.anisotropy(Point(0.5, 0.5))(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(spec.forcing(Point(0.5, 0.5)), 1.5, 1e-14);
    EXPECT_THROW(problem_from_json(nlohmann::json::parse(R"({"p": 2})")), ParameterError);
    EXPECT_THROW(problem_from_json(nlohmann::json::parse(
                     R"({"p": 2, "q": 1, "domain": [[0,0,1,1]], "forcing": {"kind": "spline"}})")),
                 ParameterError);
    EXPECT_THROW(load_problem("/nonexistent/problem.json"), ParameterError);
}

TEST(ProblemHash, DistinguishesFieldParameters) {
    ProblemSpec a, b;
    a.forcing = ForcingField::affine(1.0, Point(1, 0));
    b.forcing = ForcingField::affine(1.0, Point(2, 0));
    EXPECT_NE(problem_hash(a), problem_hash(b));
    ProblemSpec c = a;
    EXPECT_EQ(problem_hash(a), problem_hash(c));
    EXPECT_EQ(problem_hash(a).size(), 16u);
}
