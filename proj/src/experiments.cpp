#include "pscomb/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include <Eigen/LU>

#include "pscomb/limits.hpp"
#include "pscomb/varifold.hpp"

#ifndef PSCOMB_VERSION
#define PSCOMB_VERSION "0.0.0"
#endif

namespace pscomb {

std::string tool_version() { return PSCOMB_VERSION; }

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string short_fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string header_line(const Table& t) {
    return "# pscomb " + tool_version() + " " + t.title + " problem_hash=" + t.problem_hash;
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
    out << header_line(*this) << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
}

void Table::write_text(std::ostream& out) const {
    out << header_line(*this) << '\n';
    std::vector<std::vector<std::string>> cells;
    cells.push_back(columns);
    for (const auto& r : rows) {
        std::vector<std::string> row;
        for (const auto& v : r) {
            char* end = nullptr;
            const double d = std::strtod(v.c_str(), &end);
            row.push_back(!v.empty() && *end == '\0' ? short_fmt(d) : v);
        }
        cells.push_back(std::move(row));
    }
    std::vector<std::size_t> width(columns.size(), 0);
    for (const auto& r : cells)
        for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) width[i] = std::max(width[i], r[i].size());
    for (const auto& r : cells) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            out << r[i];
            if (i + 1 < r.size()) out << std::string(width[i] - r[i].size() + 2, ' ');
        }
        out << '\n';
    }
}

nlohmann::json Table::to_json() const {
    nlohmann::json j;
    j["tool"] = "pscomb";
    j["version"] = tool_version();
    j["title"] = title;
    j["problem_hash"] = problem_hash;
    j["columns"] = columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < r.size() && i < columns.size(); ++i) obj[columns[i]] = r[i];
        j["rows"].push_back(obj);
    }
    return j;
}

void ExperimentConfig::validate() const {
    if (lengths.empty()) throw ParameterError("no length budgets given");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(lengths[i] > 0.0)) throw ParameterError("length budgets must be positive");
        if (i > 0 && !(lengths[i] > lengths[i - 1])) throw ParameterError("length budgets must be strictly increasing");
    }
    if (!(resolution >= 2.0)) throw ParameterError("resolution must be at least 2");
    if (lattice < 0.0) throw ParameterError("lattice side must be positive");
    if (partition < 1) throw ParameterError("partition must be positive");
}

namespace {

double default_lattice(const ProblemSpec& problem, double lattice) {
    if (lattice > 0.0) return lattice;
    const Rect box = problem.domain.bounding_box();
    return std::max(box.width(), box.height()) / 4.0;
}

FittedVarifold fitted_prediction(const ProblemSpec& problem, double t) {
    if (problem.exponents.regime == Regime::sub) return fit_prediction(problem, t, 1);
    if (problem.exponents.regime == Regime::super)
        throw RegimeError("the prediction needs q <= p");
    // Homogeneous: rho proportional to f^{1/p} / a_max^{1/2}.
    const auto pred = optimal_density(problem);
    FittedVarifold fit;
    fit.t = t;
    fit.squares = lattice_squares(problem.domain, t);
    double z = 0.0;
    for (auto& fs : fit.squares) {
        fs.rho = pred.density(fs.square.center());
        fs.nu.atoms = {DirectionAtom{pred.orientation(fs.square.center()), 1.0}};
        z += fs.rho * fs.domain_area;
    }
    for (auto& fs : fit.squares) fs.rho /= z;
    return fit;
}

}  // namespace

PredictedComb build_predicted_comb(const ProblemSpec& problem, double lattice, double L, bool with_cells) {
    const double t = default_lattice(problem, lattice);
    PredictedComb out;
    out.fitted = fitted_prediction(problem, t);
    out.min_spacing = std::numeric_limits<double>::infinity();
    std::vector<Segment> all;
    for (const auto& fs : out.fitted.squares) {
        const double ell = fs.rho * fs.domain_area * L;
        Square q = fs.square;
        q.closed_right = q.closed_top = true;
        Comb comb = build_comb(q, fs.nu.atoms, problem.anisotropy(q.center()), ell, with_cells);
        out.min_spacing = std::min(out.min_spacing, comb.min_spacing);
        for (const auto& s : comb.sigma) all.push_back(s);
        out.combs.push_back(std::move(comb));
    }
    for (const auto& s : problem.domain.boundary()) all.push_back(s);
    out.sigma = clip_to_domain(SegmentSet(std::move(all)), problem.domain);
    return out;
}

double grid_spacing_for(const ProblemSpec& problem, double spacing, double resolution) {
    double h = problem.h;
    while (h > spacing / resolution) h *= 0.5;
    return h;
}

Table run_asymptotics(const ExperimentConfig& config) {
    config.validate();
    const ProblemSpec& base = config.problem;
    const double p = base.p();
    Table table;
    table.title = "asymptotics";
    table.problem_hash = problem_hash(base);
    table.columns = {"L", "H1", "C", "LpC", "HpC", "limit", "ratio", "h", "status"};
    const double t = default_lattice(base, config.lattice);
    double limit;
    if (base.exponents.regime == Regime::sub)
        limit = limit_constant(base);
    else
        limit = F_infinity_homogeneous(fitted_prediction(base, t), base, 4);
    for (double L : config.lengths) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        auto skip = [&](const std::string& why) {
            table.add({fmt(L), fmt(nan), fmt(nan), fmt(nan), fmt(nan), fmt(limit), fmt(nan), fmt(nan), "skipped: " + why});
        };
        PredictedComb pc;
        try {
            pc = build_predicted_comb(base, t, L);
        } catch (const LengthBudgetError& e) {
            skip(e.what());
            continue;
        }
        ProblemSpec problem = base;
        problem.h = grid_spacing_for(base, pc.min_spacing, config.resolution);
        const double nodes = base.domain.area() / (problem.h * problem.h);
        if (nodes > double(config.max_nodes)) {
            skip("grid too fine for the node budget");
            continue;
        }
        const SolveReport rep = solve(problem, pc.sigma, config.path, pc.min_spacing);
        const double h1 = pc.sigma.total_length();
        const double hpc = std::pow(h1, p) * rep.C;
        table.add({fmt(L), fmt(h1), fmt(rep.C), fmt(std::pow(L, p) * rep.C), fmt(hpc), fmt(limit), fmt(hpc / limit),
                   fmt(problem.h), "ok"});
    }
    return table;
}

Table run_density_stats(const ExperimentConfig& config) {
    config.validate();
    const ProblemSpec& problem = config.problem;
    Table table;
    table.title = "density";
    table.problem_hash = problem_hash(problem);
    table.columns = {"L", "subsquare", "x0", "y0", "side", "density", "predicted_density", "orientation",
                     "predicted_orientation", "status"};
    const double t = default_lattice(problem, config.lattice);
    PredictedComb pc;
    double used = 0.0;
    for (auto it = config.lengths.rbegin(); it != config.lengths.rend(); ++it) {
        try {
            pc = build_predicted_comb(problem, t, *it);
            used = *it;
            break;
        } catch (const LengthBudgetError&) {
        }
    }
    if (used == 0.0) throw LengthBudgetError("length budget too small for every requested L");
    const auto pred = optimal_density(problem);
    auto psi = [](const Point& y) { return y.x() * y.x(); };
    const auto squares = square_partition(problem.domain.bounding_box(), config.partition);
    for (std::size_t k = 0; k < squares.size(); ++k) {
        const auto& sq = squares[k];
        const auto pieces = problem.domain.clip(sq.rect());
        double area = 0.0;
        for (const auto& r : pieces) area += r.area();
        if (area <= 0.0) continue;
        double expected = 0.0;
        for (const auto& r : pieces) expected += integrate_domain(Domain({r}), pred.density, problem.h);
        const double dens = subsquare_density(pc.sigma, sq);
        const double orient = orientation_statistic(pc.sigma, sq, psi);
        const double orient_pred = psi(pred.orientation(sq.center()));
        table.add({fmt(used), std::to_string(k), fmt(sq.lo.x()), fmt(sq.lo.y()), fmt(sq.side), fmt(dens),
                   fmt(expected), fmt(orient), fmt(orient_pred), std::isnan(orient) ? "empty" : "ok"});
    }
    return table;
}

namespace {

bool constant_unit_data(const ProblemSpec& problem) {
    if (!problem.anisotropy.is_constant() || !problem.forcing.is_constant()) return false;
    return problem.forcing(problem.domain.bounding_box().center()) == 1.0;
}

double covered_length(const SegmentSet& sigma, const Segment& side) {
    const Rect line{side.a.cwiseMin(side.b), side.a.cwiseMax(side.b)};
    double len = 0.0;
    for (const auto& s : sigma)
        if (auto c = clip_segment(s, line)) len += c->length();
    return len;
}

}  // namespace

Table run_verify(const std::vector<VerifyCase>& cases, const VerifyOptions& options, bool& all_passed) {
    Table table;
    table.title = "verify";
    table.problem_hash = cases.empty() ? std::string() : problem_hash(cases.front().problem);
    table.columns = {"case", "p", "q", "bound", "value", "C", "relation", "pass"};
    all_passed = true;
    for (const auto& vc : cases) {
        const ProblemSpec& problem = vc.problem;
        const double p = problem.p(), q = problem.q();
        const Grid grid = build_grid(problem.domain, problem.h);
        const DirichletMask mask = rasterize(vc.sigma, grid, vc.feature_spacing);
        const SolveReport rep = solve(problem, grid, mask);
        const double c = rep.C;
        auto row = [&](const std::string& bound, double value, bool lower) {
            const bool ok = lower ? value <= c * (1.0 + options.tolerance) : c <= value * (1.0 + options.tolerance);
            if (!ok) all_passed = false;
            table.add({vc.name, fmt(p), fmt(q), bound, fmt(value), fmt(c), lower ? "bound<=C" : "C<=bound",
                       ok ? "pass" : "FAIL"});
        };
        table.add({vc.name, fmt(p), fmt(q), "solver", fmt(c), fmt(c), "-", "-"});
        if (!constant_unit_data(problem)) continue;
        const Eigen::Matrix2d a = problem.anisotropy(problem.domain.bounding_box().center());
        const double len_a = riemannian_length(vc.sigma, problem.anisotropy);
        const int comps = connected_components(vc.sigma);
        const BoundReport lb = lower_bound(len_a, comps, problem.domain.area(), a.determinant(), p, q);
        row("lower", lb.value * options.lower_scale, true);

        // Two opposite sides of a single rectangle, normal along an eigenvector of A.
        if (problem.domain.rects().size() == 1) {
            const Rect r = problem.domain.rects().front();
            const Segment left{r.lo, Point(r.lo.x(), r.hi.y())}, right{Point(r.hi.x(), r.lo.y()), r.hi};
            const Segment bottom{r.lo, Point(r.hi.x(), r.lo.y())}, top{Point(r.lo.x(), r.hi.y()), r.hi};
            auto covers = [&](const Segment& s) { return covered_length(vc.sigma, s) >= s.length() * (1.0 - 1e-9); };
            auto try_pair = [&](const Segment& s1, const Segment& s2, const Point& xi, double width) {
                if (!covers(s1) || !covers(s2)) return;
                if ((a * xi - xi.dot(a * xi) * xi).norm() > 1e-12 * a.norm()) return;
                const double value = c_pq_closed(p, q) * std::pow(r.area(), p / q - 1.0) *
                                     std::pow(width / std::sqrt(xi.dot(a * xi)), p);
                row("two-sided-rectangle", value * options.upper_scale, false);
            };
            try_pair(left, right, Point(1, 0), r.width());
            try_pair(bottom, top, Point(0, 1), r.height());
        }
        if (!vc.cells.empty()) {
            const BoundReport ub = comb_upper(vc.cells, a, p, q);
            row(q < p ? "comb-cells-combined" : "comb-cells-max", ub.value * options.upper_scale, false);
        }
    }
    return table;
}

std::vector<VerifyCase> random_comb_cases(int count, std::uint64_t seed, double resolution) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::pair<double, double> exps[] = {{2.0, 1.0}, {2.0, 2.0}, {3.0, 2.0}, {2.0, 1.0}, {2.0, 2.0}};
    std::vector<VerifyCase> out;
    int attempt = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempt > 100 * count) throw ParameterError("could not draw enough feasible comb cases");
        const auto [p, q] = exps[rng() % 5];
        const double theta = M_PI * unit(rng);
        const double l1 = 0.5 + 2.0 * unit(rng), l2 = 0.5 + 2.0 * unit(rng);
        Eigen::Matrix2d rot;
        rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
        const Eigen::Matrix2d a = rot * Eigen::Vector2d(l1, l2).asDiagonal() * rot.transpose();
        DirectionMeasure nu;
        const int atoms = 1 + static_cast<int>(rng() % 2);
        for (int k = 0; k < atoms; ++k) {
            const double phi = M_PI * unit(rng);
            nu.push_back({Point(std::cos(phi), std::sin(phi)), 0.25 + unit(rng)});
        }
        double mass = 0.0;
        for (auto& atom : nu) mass += atom.weight;
        for (auto& atom : nu) atom.weight /= mass;
        const double ell = 12.0 + 28.0 * unit(rng);

        VerifyCase vc;
        vc.problem.exponents = ExponentPair::make(p, q);
        vc.problem.domain = Domain::unit_square();
        vc.problem.anisotropy = AnisotropyField::constant(a);
        vc.problem.forcing = ForcingField::constant(1.0);
        vc.problem.h = 1.0 / 16.0;
        Square sq;
        sq.lo = Point(0, 0);
        sq.side = 1.0;
        Comb comb;
        try {
            comb = build_comb(sq, nu, a, ell, true);
        } catch (const LengthBudgetError&) {
            continue;
        }
        vc.problem.h = grid_spacing_for(vc.problem, comb.min_spacing, resolution);
        const double floor_h = p == 2.0 ? 1.0 / 512.0 : 1.0 / 256.0;
        if (vc.problem.h < floor_h) continue;
        char name[32];
        std::snprintf(name, sizeof name, "random-%02d", static_cast<int>(out.size()));
        vc.name = name;
        vc.sigma = comb.sigma;
        vc.cells = std::move(comb.cells);
        vc.feature_spacing = comb.min_spacing;
        out.push_back(std::move(vc));
    }
    return out;
}

namespace {

ProblemSpec scaled_problem(const ProblemSpec& problem, double t) {
    ProblemSpec out = problem;
    out.domain = problem.domain.scaled(t);
    out.h = problem.h * t;
    const AnisotropyField a = problem.anisotropy;
    const ForcingField f = problem.forcing;
    out.anisotropy = AnisotropyField([a, t](const Point& x) { return a(Point(x / t)); }, a.is_constant(),
                                     a.description());
    out.forcing = ForcingField([f, t](const Point& x) { return f(Point(x / t)); }, f.is_constant(), f.description());
    return out;
}

}  // namespace

Table run_scaling_fit(const ExperimentConfig& config, const SegmentSet& sigma) {
    config.validate();
    const ProblemSpec& base = config.problem;
    const double p = base.p(), q = base.q();
    Table table;
    table.title = "scaling";
    table.problem_hash = problem_hash(base);
    table.columns = {"mode", "p", "q", "fitted", "target", "gap", "note"};

    // Comb sweep: C against the length actually spent.
    {
        std::vector<std::pair<double, double>> samples;
        if (base.exponents.regime != Regime::super) {
            const Table sweep = run_asymptotics(config);
            for (const auto& r : sweep.rows)
                if (r.back() == "ok") samples.emplace_back(std::stod(r[1]), std::stod(r[2]));
        } else {
            // No prediction exists for q > p; use uniform isotropic combs.
            for (double L : config.lengths) {
                Square sq;
                sq.lo = base.domain.bounding_box().lo;
                sq.side = std::max(base.domain.bounding_box().width(), base.domain.bounding_box().height());
                try {
                    const Comb comb = build_comb(sq, {{Point(1, 0), 1.0}}, Eigen::Matrix2d::Identity(), L, false);
                    SegmentSet s = comb.sigma;
                    for (const auto& b : base.domain.boundary()) s.push_back(b);
                    s = clip_to_domain(s, base.domain);
                    ProblemSpec pr = base;
                    pr.h = grid_spacing_for(base, comb.min_spacing, config.resolution);
                    samples.emplace_back(s.total_length(), solve(pr, s, config.path, comb.min_spacing).C);
                } catch (const LengthBudgetError&) {
                }
            }
        }
        const bool exploratory = base.exponents.regime == Regime::super;
        const double target = exploratory ? p + 2.0 * (p / q - 1.0) : p;
        if (samples.size() >= 2) {
            const double fitted = fit_scaling_exponent(samples);
            table.add({"comb-sweep", fmt(p), fmt(q), fmt(fitted), fmt(target), fmt(std::abs(fitted - target) / target),
                       exploratory ? "no accuracy contract" : "ok"});
        } else {
            table.add({"comb-sweep", fmt(p), fmt(q), "nan", fmt(target), "nan", "skipped: fewer than two feasible L"});
        }
    }
    // Exact rescale: the same sigma scaled with the domain, L = 1/t.
    {
        std::vector<std::pair<double, double>> samples;
        for (double t : {1.0, 0.5, 0.25}) {
            const ProblemSpec pr = scaled_problem(base, t);
            samples.emplace_back(1.0 / t, solve(pr, sigma.scaled(t), config.path).C);
        }
        const double fitted = fit_scaling_exponent(samples);
        const double target = base.exponents.scaling_exponent();
        table.add({"exact-rescale", fmt(p), fmt(q), fmt(fitted), fmt(target), fmt(std::abs(fitted - target)),
                   base.exponents.regime == Regime::super ? "no accuracy contract" : "ok"});
    }
    return table;
}

}  // namespace pscomb
