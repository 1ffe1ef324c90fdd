#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pscomb/experiments.hpp"
#include "pscomb/limits.hpp"

using namespace pscomb;

namespace {

ProblemSpec make_problem(double p, double q, double h) {
    ProblemSpec s;
    s.exponents = ExponentPair::make(p, q);
    s.h = h;
    return s;
}

int column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return static_cast<int>(i);
    return -1;
}

}  // namespace

TEST(Fmt, SeventeenDigits) {
    EXPECT_EQ(fmt(0.1), "0.10000000000000001");
    EXPECT_EQ(fmt(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(Table, HeaderAndCsv) {
    Table t;
    t.title = "demo";
    t.problem_hash = "abc";
    t.columns = {"a", "b"};
    t.add({"1", "2"});
    std::ostringstream out;
    t.write_csv(out);
    EXPECT_EQ(out.str(), "# pscomb " + tool_version() + " demo problem_hash=abc\na,b\n1,2\n");
    EXPECT_EQ(t.to_json()["rows"].size(), 1u);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.lengths = {8, 4};
    EXPECT_THROW(c.validate(), ParameterError);
    c.lengths = {-1};
    EXPECT_THROW(c.validate(), ParameterError);
    c.lengths = {4, 8};
    EXPECT_NO_THROW(c.validate());
}

TEST(PredictedComb, ContainsBoundaryAndStaysInside) {
    const ProblemSpec s = make_problem(2, 1, 1.0 / 16);
    const auto pc = build_predicted_comb(s, 0.5, 40.0);
    EXPECT_GT(pc.min_spacing, 0.0);
    EXPECT_EQ(pc.combs.size(), 4u);
    for (const auto& seg : pc.sigma) {
        EXPECT_TRUE(s.domain.contains(seg.a, 1e-12));
        EXPECT_TRUE(s.domain.contains(seg.b, 1e-12));
    }
    EXPECT_EQ(connected_components(pc.sigma), 1);
}

TEST(Asymptotics, SingleLengthRowAndDeterminism) {
    ExperimentConfig c;
    c.problem = make_problem(2, 1, 1.0 / 16);
    c.lengths = {8.0};
    c.lattice = 1.0;
    c.resolution = 2.0;
    const Table a = run_asymptotics(c);
    const Table b = run_asymptotics(c);
    ASSERT_EQ(a.rows.size(), 1u);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.rows[0].back(), "ok");
    const double ratio = std::stod(a.rows[0][column(a, "ratio")]);
    EXPECT_GT(ratio, 1.0);
    EXPECT_NEAR(std::stod(a.rows[0][column(a, "limit")]), 1.0 / 12.0, 1e-12);
}

TEST(Asymptotics, RejectsSuperHomogeneous) {
    ExperimentConfig c;
    c.problem = make_problem(2, 3, 1.0 / 16);
    c.lengths = {8.0};
    EXPECT_THROW(run_asymptotics(c), RegimeError);
}

TEST(Verify, TwoSidedRectanglePasses) {
    VerifyCase vc;
    vc.name = "rect";
    vc.problem = make_problem(2, 2, 1.0 / 32);
    vc.sigma = SegmentSet({Segment{Point(0, 0), Point(0, 1)}, Segment{Point(1, 0), Point(1, 1)}});
    bool ok = false;
    const Table t = run_verify({vc}, VerifyOptions{}, ok);
    EXPECT_TRUE(ok);
    bool saw_rect = false;
    for (const auto& r : t.rows) saw_rect |= r[3] == "two-sided-rectangle";
    EXPECT_TRUE(saw_rect);

    VerifyOptions corrupt;
    corrupt.upper_scale = 0.5;
    run_verify({vc}, corrupt, ok);
    EXPECT_FALSE(ok);
}

TEST(Verify, HomogeneousCombUsesMax) {
    auto cases = random_comb_cases(2, 3);
    ASSERT_EQ(cases.size(), 2u);
    EXPECT_EQ(cases[0].name, "random-00");
    const auto again = random_comb_cases(2, 3);
    EXPECT_EQ(cases[1].sigma.size(), again[1].sigma.size());
    EXPECT_FALSE(cases[0].cells.empty());
}

TEST(Scaling, ExactRescaleMatchesExponent) {
    for (auto [p, q] : {std::pair{2.0, 1.0}, {2.0, 2.0}, {3.0, 2.0}}) {
        ExperimentConfig c;
        c.problem = make_problem(p, q, 1.0 / 16);
        c.lengths = {8.0};
        const Table t = run_scaling_fit(c, SegmentSet(c.problem.domain.boundary()));
        bool found = false;
        for (const auto& r : t.rows)
            if (r[0] == "exact-rescale") {
                found = true;
                EXPECT_NEAR(std::stod(r[3]), c.problem.exponents.scaling_exponent(), 1e-6);
            }
        EXPECT_TRUE(found);
    }
}

TEST(DensityStats, UniformPrediction) {
    ExperimentConfig c;
    c.problem = make_problem(2, 1, 1.0 / 16);
    c.lengths = {200.0};
    c.lattice = 1.0;
    c.partition = 2;
    const Table t = run_density_stats(c);
    ASSERT_EQ(t.rows.size(), 4u);
    const int d = column(t, "density"), pd = column(t, "predicted_density");
    for (const auto& r : t.rows) EXPECT_NEAR(std::stod(r[d]) / std::stod(r[pd]), 1.0, 0.1);
}
