#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pscomb/limits.hpp"
#include "pscomb/solver.hpp"

using namespace pscomb;

namespace {

ProblemSpec make_problem(double p, double q, double h) {
    ProblemSpec s;
    s.exponents = ExponentPair::make(p, q);
    s.h = h;
    return s;
}

SegmentSet two_sides() {
    return SegmentSet({Segment{Point(0, 0), Point(0, 1)}, Segment{Point(1, 0), Point(1, 1)}});
}

SegmentSet full_boundary(const Domain& d) { return SegmentSet(d.boundary()); }

// Torsional rigidity of the unit square by its double sine series.
double square_torsion() {
    double sum = 0.0;
    for (int m = 1; m < 400; m += 2)
        for (int n = 1; n < 400; n += 2) {
            const double mm = m * m, nn = n * n;
            sum += 1.0 / (mm * nn * (mm + nn));
        }
    return 64.0 / std::pow(M_PI, 6) * sum;
}

}  // namespace

TEST(Rasterize, Examples) {
    const Grid g = build_grid(Domain::unit_square(), 0.25);
    const auto empty = rasterize(SegmentSet(), g);
    EXPECT_EQ(empty.constrained_count, 0);
    const auto side = rasterize(SegmentSet({Segment{Point(0, 0), Point(0, 1)}}), g);
    EXPECT_EQ(side.constrained_count, 5);
    const auto full = rasterize(full_boundary(Domain::unit_square()), g);
    EXPECT_EQ(full.constrained_count, 16);
    EXPECT_EQ(full.free_count(), 9);
    // Midline between lattice rows: distance h/2 counts as constrained.
    const auto mid = rasterize(SegmentSet({Segment{Point(0, 0.125), Point(1, 0.125)}}), g);
    EXPECT_EQ(mid.constrained_count, 10);
    const auto warn = rasterize(two_sides(), g, 0.25);
    EXPECT_FALSE(warn.warnings.empty());
}

TEST(Rasterize, RejectsInvisibleSet) {
    const Grid g = build_grid(Domain::unit_square(), 0.25);
    EXPECT_THROW(rasterize(SegmentSet({Segment{Point(0.1, 0.1), Point(0.11, 0.1)}}), g), GeometryError);
}

TEST(Energy, Examples) {
    const ProblemSpec s = make_problem(2, 2, 0.125);
    const Grid g = build_grid(s.domain, s.h);
    const EnergyAssembler e(s, g);
    Eigen::VectorXd u(g.node_count());
    u.setConstant(3.0);
    EXPECT_NEAR(e.energy(u), 0.0, 1e-14);
    for (int i = 0; i < g.node_count(); ++i) u(i) = g.nodes()[i].x();
    EXPECT_NEAR(e.energy(u), 1.0, 1e-13);
    EXPECT_NEAR(e.energy(2.0 * u), 4.0, 1e-12);
    ProblemSpec an = s;
    an.anisotropy = AnisotropyField::diagonal(4, 1);
    EXPECT_NEAR(EnergyAssembler(an, g).energy(u), 4.0, 1e-12);
}

TEST(Energy, StiffnessMatchesEnergyAtTwo) {
    ProblemSpec s = make_problem(2, 2, 0.125);
    s.anisotropy = AnisotropyField::affine({2, 0.3, 1}, {0.5, 0, 0}, {0, 0.1, 0.2});
    const Grid g = build_grid(s.domain, s.h);
    const EnergyAssembler e(s, g);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0, 1);
    Eigen::VectorXd u(g.node_count());
    for (int i = 0; i < u.size(); ++i) u(i) = n(rng);
    EXPECT_NEAR(u.dot(e.stiffness() * u) / e.energy(u), 1.0, 1e-12);
}

TEST(Energy, GradientMatchesFiniteDifferences) {
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
        ProblemSpec s = make_problem(p, 1, 0.125);
        s.anisotropy = AnisotropyField::affine({2, 0.3, 1}, {0.5, 0, 0}, {0, 0.1, 0.2});
        const Grid g = build_grid(s.domain, s.h);
        std::mt19937_64 rng(static_cast<unsigned>(p * 10));
        std::normal_distribution<double> n(0, 1);
        Eigen::VectorXd u(g.node_count());
        for (int i = 0; i < u.size(); ++i) u(i) = n(rng);
        const auto [energy, grad] = assemble_energy(s, g, u);
        EXPECT_GT(energy, 0.0);
        const EnergyAssembler e(s, g);
        double worst = 0.0;
        for (int i = 0; i < u.size(); i += 7) {
            const double step = 1e-6 * std::max(1.0, std::abs(u(i)));
            Eigen::VectorXd up = u, dn = u;
            up(i) += step;
            dn(i) -= step;
            const double fd = (e.energy(up) - e.energy(dn)) / (2 * step);
            worst = std::max(worst, std::abs(fd - grad(i)) / std::max(std::abs(grad(i)), 1e-3 * grad.norm()));
        }
        EXPECT_LT(worst, 1e-5) << "p=" << p;
    }
}

TEST(Solve, TwoSidedRectangleHomogeneous) {
    const auto r = solve(make_problem(2, 2, 1.0 / 64), two_sides(), SolvePath::eigen);
    EXPECT_NEAR(r.C * M_PI * M_PI, 1.0, 0.02);
    EXPECT_NEAR(r.lambda * r.C, 1.0, 1e-12);
}

TEST(Solve, TwoSidedRectangleAnisotropic) {
    ProblemSpec s = make_problem(2, 2, 1.0 / 64);
    s.anisotropy = AnisotropyField::diagonal(4, 1);
    const auto r = solve(s, two_sides(), SolvePath::eigen);
    EXPECT_NEAR(r.C * 4 * M_PI * M_PI, 1.0, 0.02);
}

TEST(Solve, TwoSidedRectangleCompliance) {
    const auto r = solve(make_problem(2, 1, 1.0 / 64), two_sides(), SolvePath::compliance);
    EXPECT_NEAR(r.C * 12.0, 1.0, 0.02);
    EXPECT_GE(r.u.minCoeff(), -1e-12);
}

TEST(Solve, FullBoundaryTorsion) {
    const auto r = solve(make_problem(2, 1, 1.0 / 64), full_boundary(Domain::unit_square()));
    EXPECT_NEAR(r.C / square_torsion(), 1.0, 0.02);
}

TEST(Solve, RayleighAgreesWithOtherPaths) {
    const ProblemSpec s22 = make_problem(2, 2, 1.0 / 32);
    const auto sigma = full_boundary(Domain::unit_square());
    const auto e = solve(s22, sigma, SolvePath::eigen);
    const auto g = solve(s22, sigma, SolvePath::general);
    EXPECT_NEAR(g.C / e.C, 1.0, 1e-3);
    const ProblemSpec s21 = make_problem(2, 1, 1.0 / 32);
    const auto c = solve(s21, sigma, SolvePath::compliance);
    const auto g1 = solve(s21, sigma, SolvePath::general);
    EXPECT_NEAR(g1.C / c.C, 1.0, 5e-3);
}

TEST(Solve, ForcingScaling) {
    for (auto [p, q] : {std::pair{2.0, 2.0}, {2.0, 1.0}}) {
        ProblemSpec s = make_problem(p, q, 1.0 / 32);
        const auto base = solve(s, two_sides());
        s.forcing = ForcingField::constant(2.0);
        const auto twice = solve(s, two_sides());
        EXPECT_NEAR(twice.C / base.C, std::pow(2.0, p / q), 1e-6);
    }
}

TEST(Solve, SignAndBoundaryValues) {
    const ProblemSpec s = make_problem(2, 2, 1.0 / 32);
    const Grid g = build_grid(s.domain, s.h);
    const auto mask = rasterize(two_sides(), g);
    const auto r = solve(s, g, mask);
    EXPECT_GE(r.u.minCoeff(), -1e-10);
    for (int i = 0; i < g.node_count(); ++i)
        if (mask.constrained[i]) {
            EXPECT_EQ(r.u(i), 0.0);
        }
}

TEST(Solve, MeshConvergence) {
    const double exact = 1.0 / (2 * M_PI * M_PI);
    double prev = 1.0;
    for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
        const auto r = solve(make_problem(2, 2, h), full_boundary(Domain::unit_square()));
        const double err = std::abs(r.C / exact - 1.0);
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(Solve, EulerLagrangeResidual) {
    const ProblemSpec s22 = make_problem(2, 2, 1.0 / 32);
    const Grid g = build_grid(s22.domain, s22.h);
    const auto mask = rasterize(two_sides(), g);
    const auto r22 = solve(s22, g, mask);
    EXPECT_LT(euler_lagrange_residual(r22, s22, g, mask), 1e-6);
    const ProblemSpec s32 = make_problem(3, 2, 1.0 / 32);
    const auto r32 = solve(s32, g, mask);
    EXPECT_LT(euler_lagrange_residual(r32, s32, g, mask), 1e-4);
}

TEST(Solve, MaskRefinementIsMonotone) {
    const ProblemSpec s = make_problem(2, 1, 1.0 / 16);
    const Grid g = build_grid(s.domain, s.h);
    const auto base = rasterize(full_boundary(s.domain), g);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        DirichletMask coarse = base;
        for (int k = 0; k < 3; ++k) coarse.constrain(pick(rng), 0);
        DirichletMask fine = coarse;
        for (int k = 0; k < 4; ++k) fine.constrain(pick(rng), 1);
        if (fine.free_count() == 0) continue;
        const double c0 = solve(s, g, coarse).C;
        const double c1 = solve(s, g, fine).C;
        if (c1 > c0 * (1.0 + 1e-9)) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(Solve, DiscreteScalingIdentity) {
    // Dilating domain, grid and sigma by t multiplies C by t^{p + 2p/q - 2}.
    for (auto [p, q] : {std::pair{2.0, 1.0}, {2.0, 2.0}}) {
        ProblemSpec s = make_problem(p, q, 1.0 / 16);
        const auto sigma = full_boundary(s.domain);
        const double c1 = solve(s, sigma).C;
        ProblemSpec big = s;
        big.domain = s.domain.scaled(2.0);
        big.h = s.h * 2.0;
        const double c2 = solve(big, sigma.scaled(2.0)).C;
        EXPECT_NEAR(std::log(c2 / c1) / std::log(2.0), s.exponents.scaling_exponent(), 1e-6);
    }
}

TEST(Solve, TrivialSpace) {
    const ProblemSpec s = make_problem(2, 2, 0.5);
    const Grid g = build_grid(s.domain, s.h);
    DirichletMask m = rasterize(full_boundary(s.domain), g);
    m.constrain(g.node_at(1, 1), 0);
    EXPECT_THROW(solve(s, g, m), TrivialSpaceError);
}

TEST(SolvePathNames, RoundTrip) {
    for (auto p : {SolvePath::automatic, SolvePath::eigen, SolvePath::compliance, SolvePath::general})
        EXPECT_EQ(solve_path_from_string(to_string(p)), p);
    EXPECT_THROW(solve_path_from_string("magic"), ParameterError);
}
