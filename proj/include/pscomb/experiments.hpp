#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pscomb/bounds.hpp"
#include "pscomb/problem.hpp"
#include "pscomb/segments.hpp"
#include "pscomb/solver.hpp"
#include "pscomb/tile.hpp"
#include "pscomb/varifold.hpp"

namespace pscomb {

std::string tool_version();

/// Rows of strings plus a header line carrying the tool version and problem hash.
struct Table {
    std::string title;
    std::string problem_hash;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    void write_csv(std::ostream& out) const;
    void write_text(std::ostream& out) const;
    nlohmann::json to_json() const;
};

/// 17 significant digits; "inf"/"nan" spelled out.
std::string fmt(double v);

struct ExperimentConfig {
    ProblemSpec problem;
    std::vector<double> lengths{8.0, 16.0, 32.0};
    double lattice = 0.0;        // square side; 0 means a quarter of the longer bounding-box side
    double resolution = 8.0;     // grid spacing <= smallest comb feature / resolution
    long long max_nodes = 4'000'000;
    int partition = 4;           // density statistics: partition x partition subsquares
    std::uint64_t seed = 0;
    SolvePath path = SolvePath::automatic;

    /// Throws ParameterError unless lengths are positive and strictly increasing.
    void validate() const;
};

/// Dirichlet region realizing the piecewise-constant prediction at length L:
/// per lattice square a comb of length rho_i |Omega cap Q_i| L oriented by
/// xi(center), clipped to the domain, together with the domain boundary.
struct PredictedComb {
    SegmentSet sigma;
    double min_spacing = 0.0;
    FittedVarifold fitted;
    std::vector<Comb> combs;
};
PredictedComb build_predicted_comb(const ProblemSpec& problem, double lattice, double L, bool with_cells = false);

/// Largest h = problem.h / 2^k with h <= spacing / resolution.
double grid_spacing_for(const ProblemSpec& problem, double spacing, double resolution);

/// Columns: L, H1, C, LpC, HpC, limit, ratio, h, status. ratio = H1^p C / limit.
Table run_asymptotics(const ExperimentConfig& config);

/// Columns: L, subsquare, x0, y0, side, density, predicted_density, orientation,
/// predicted_orientation, status; psi(y) = (y . e1)^2. Uses the largest L whose
/// combs can be built.
Table run_density_stats(const ExperimentConfig& config);

struct VerifyCase {
    std::string name;
    ProblemSpec problem;
    SegmentSet sigma;
    std::vector<CombCell> cells;  // free cells when sigma is a comb
    double feature_spacing = 0.0;
};

struct VerifyOptions {
    double tolerance = 0.03;
    double upper_scale = 1.0;  // multiplies every upper bound (testing hook)
    double lower_scale = 1.0;
};

/// Sandwich rows per case: lower bound, solver C, applicable upper bounds,
/// each with a pass/fail flag. `all_passed` is cleared on any failure.
Table run_verify(const std::vector<VerifyCase>& cases, const VerifyOptions& options, bool& all_passed);

/// Random comb cases on the unit square with constant A and f = 1.
std::vector<VerifyCase> random_comb_cases(int count, std::uint64_t seed, double resolution = 8.0);

/// Columns: mode, p, q, fitted, target, gap, note. Rows: comb sweep (target p),
/// exact rescale of the problem with sigma (target p + 2p/q - 2), and for q > p
/// an exploratory row with no accuracy contract.
Table run_scaling_fit(const ExperimentConfig& config, const SegmentSet& sigma);

}  // namespace pscomb
