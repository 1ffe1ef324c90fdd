// Command-line front end for the pscomb library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pscomb/bounds.hpp"
#include "pscomb/errors.hpp"
#include "pscomb/experiments.hpp"
#include "pscomb/limits.hpp"
#include "pscomb/problem_io.hpp"
#include "pscomb/segment_io.hpp"
#include "pscomb/solver.hpp"
#include "pscomb/tile.hpp"

using namespace pscomb;
using nlohmann::json;

namespace {

struct Globals {
    std::string problem_path;
    std::string out_path;
    bool json_out = false;
    std::uint64_t seed = 0;
};

ProblemSpec load_or_default(const Globals& g) {
    return g.problem_path.empty() ? ProblemSpec{} : load_problem(g.problem_path);
}

// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& text) {
    if (g.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + g.out_path);
    f << text;
}

void emit_table(const Globals& g, const Table& t, bool csv_default) {
    std::ostringstream s;
    if (g.json_out)
        s << t.to_json().dump(2) << '\n';
    else if (csv_default || !g.out_path.empty())
        t.write_csv(s);
    else
        t.write_text(s);
    emit(g, s.str());
}

DirectionMeasure measure_from(const std::vector<double>& angles_deg, std::vector<double> weights) {
    if (angles_deg.empty()) throw ParameterError("at least one normal angle is required");
    if (weights.empty()) weights.assign(angles_deg.size(), 1.0);
    if (weights.size() != angles_deg.size()) throw ParameterError("--weights must match --normal-angles");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ParameterError("direction weights must be positive");
        total += w;
    }
    DirectionMeasure nu;
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const double a = angles_deg[i] * M_PI / 180.0;
        nu.push_back({Point(std::cos(a), std::sin(a)), weights[i] / total});
    }
    return nu;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

void dump_u(const std::string& path, const Grid& grid, const Eigen::VectorXd& u) {
    std::ofstream f(path);
    if (!f) throw ParameterError("cannot write " + path);
    f << "x,y,u\n";
    char buf[128];
    for (int i = 0; i < grid.node_count(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.nodes()[i].x(), grid.nodes()[i].y(), u(i));
        f << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pscomb: anisotropic Poincare-Sobolev constants with segment Dirichlet regions"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Globals g;
    app.add_option("--problem", g.problem_path, "Problem JSON file (default: unit square, p = q = 2, A = I, f = 1)");
    app.add_option("--out", g.out_path, "Write the main output here instead of stdout");
    app.add_flag("--json", g.json_out, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Random seed for randomized runs");
    app.set_version_flag("--version", tool_version());

    // constants
    double cp = 2.0, cq = 2.0;
    int oracle_n = 2048;
    auto* constants = app.add_subcommand("constants", "Interval constant c_{p,q}: closed form, 1-D oracle and gap");
    constants->add_option("--p", cp, "Exponent p > 1")->required();
    constants->add_option("--q", cq, "Exponent q >= 1")->required();
    constants->add_option("--oracle-n", oracle_n, "Oracle grid intervals");

    // solve
    std::string sigma_path, path_name = "auto", dump_path;
    auto* solve_cmd = app.add_subcommand("solve", "Solve for C(Omega, Sigma); prints a JSON report {C, iterations, residual, h, path}");
    solve_cmd->add_option("--sigma", sigma_path, "Segment CSV (x1,y1,x2,y2)")->required();
    solve_cmd->add_option("--path", path_name, "auto|eigen|compliance|general");
    solve_cmd->add_option("--dump-u", dump_path, "Write the maximizer as CSV columns x,y,u");

    // comb
    std::string comb_square = "0,0,1", comb_angles = "0", comb_weights, comb_a = "1,0,1";
    double comb_length = 16.0;
    auto* comb_cmd = app.add_subcommand(
        "comb", "Build a comb; CSV columns x1,y1,x2,y2 (17 significant digits), metadata on stderr or in JSON");
    comb_cmd->add_option("--square", comb_square, "x0,y0,side");
    comb_cmd->add_option("--normal-angles", comb_angles, "Segment normal angles in degrees, comma separated");
    comb_cmd->add_option("--weights", comb_weights, "Direction weights, comma separated (default uniform)");
    comb_cmd->add_option("--anisotropy", comb_a, "a11,a12,a22");
    comb_cmd->add_option("--length", comb_length, "Length budget for the square");

    // verify
    std::string verify_sigma;
    double verify_length = 0.0, upper_scale = 1.0, verify_res = 32.0;
    std::string verify_angles = "0", verify_weights;
    int random_n = 0;
    auto* verify_cmd = app.add_subcommand(
        "verify", "Sandwich table; columns case,p,q,bound,value,C,relation,pass; exit 1 on any failure");
    verify_cmd->add_option("--sigma", verify_sigma, "Segment CSV");
    verify_cmd->add_option("--comb-length", verify_length, "Build a comb on the unit square with this length");
    verify_cmd->add_option("--normal-angles", verify_angles, "Comb normal angles in degrees");
    verify_cmd->add_option("--weights", verify_weights, "Comb direction weights");
    verify_cmd->add_option("--random", random_n, "Add N random comb cases drawn with --seed");
    verify_cmd->add_option("--resolution", verify_res, "Grid points per smallest comb spacing (default 32; random cases use 8 unless given)");
    verify_cmd->add_option("--upper-scale", upper_scale, "Multiply every upper bound (testing)");

    // experiments
    std::string lengths = "8,16,32";
    double lattice = 0.0, resolution = 8.0;
    int partition = 4;
    std::string exp_path = "auto";
    auto add_exp_opts = [&](CLI::App* c) {
        c->add_option("--lengths", lengths, "Strictly increasing length budgets, comma separated");
        c->add_option("--lattice", lattice, "Lattice square side (default: quarter of the bounding box)");
        c->add_option("--resolution", resolution, "Grid points per smallest comb spacing");
        c->add_option("--path", exp_path, "Solver path");
    };
    auto* asym_cmd = app.add_subcommand(
        "asymptotics", "Length sweep; CSV columns L,H1,C,LpC,HpC,limit,ratio,h,status (ratio = H1^p C / limit)");
    add_exp_opts(asym_cmd);
    auto* dens_cmd = app.add_subcommand("density",
                                        "Subsquare statistics; CSV columns L,subsquare,x0,y0,side,density,"
                                        "predicted_density,orientation,predicted_orientation,status");
    add_exp_opts(dens_cmd);
    dens_cmd->add_option("--partition", partition, "Subsquares per side");
    std::string scaling_sigma;
    auto* scale_cmd =
        app.add_subcommand("scaling", "Exponent fits; CSV columns mode,p,q,fitted,target,gap,note");
    add_exp_opts(scale_cmd);
    scale_cmd->add_option("--sigma", scaling_sigma, "Segment CSV for the exact-rescale row (default: domain boundary)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*constants) {
            ExponentPair::make(cp, cq);
            const double closed = c_pq_closed(cp, cq);
            const OneDimEigen oracle = interval_eigen_1d(cp, cq, oracle_n);
            const double gap = std::abs(oracle.value - closed) / closed;
            std::ostringstream s;
            if (g.json_out) {
                json j{{"p", cp}, {"q", cq}, {"closed_form", closed}, {"oracle", oracle.value},
                       {"oracle_n", oracle_n}, {"relative_gap", gap}, {"iterations", oracle.iterations}};
                s << j.dump(2) << '\n';
            } else {
                s << "p " << fmt(cp) << "  q " << fmt(cq) << "\nclosed_form " << fmt(closed) << "\noracle "
                  << fmt(oracle.value) << " (n=" << oracle_n << ")\nrelative_gap " << fmt(gap) << '\n';
            }
            emit(g, s.str());
            return 0;
        }
        if (*solve_cmd) {
            const ProblemSpec problem = load_or_default(g);
            const SegmentSet sigma = load_segments(sigma_path);
            const Grid grid = build_grid(problem.domain, problem.h);
            const DirichletMask mask = rasterize(sigma, grid);
            for (const auto& w : mask.warnings) std::cerr << "warning: " << w << '\n';
            const SolveReport rep = solve(problem, grid, mask, solve_path_from_string(path_name));
            json j{{"C", rep.C},         {"lambda", rep.lambda}, {"iterations", rep.iterations},
                   {"residual", rep.residual}, {"h", rep.h},     {"path", to_string(rep.path)},
                   {"problem_hash", problem_hash(problem)}, {"version", tool_version()}};
            emit(g, j.dump(2) + "\n");
            if (!dump_path.empty()) dump_u(dump_path, grid, rep.u);
            return 0;
        }
        if (*comb_cmd) {
            const auto sq_v = parse_list(comb_square);
            const auto a_v = parse_list(comb_a);
            if (sq_v.size() != 3 || a_v.size() != 3) throw ParameterError("--square and --anisotropy take three values");
            Square sq;
            sq.lo = Point(sq_v[0], sq_v[1]);
            sq.side = sq_v[2];
            sq.closed_right = sq.closed_top = true;
            Eigen::Matrix2d a;
            a << a_v[0], a_v[1], a_v[1], a_v[2];
            check_ellipticity(AnisotropyField::constant(a), Domain::unit_square(), 1);
            const Comb comb =
                build_comb(sq, measure_from(parse_list(comb_angles), parse_list(comb_weights)), a, comb_length, false);
            json meta{{"eps", comb.eps},
                      {"m", comb.m},
                      {"segments", comb.sigma.size()},
                      {"length", comb.sigma.total_length()},
                      {"target_length", comb.target_length},
                      {"length_ratio", comb.length_ratio},
                      {"anisotropic_mean", comb.anisotropic_mean},
                      {"min_spacing", comb.min_spacing}};
            if (g.json_out) {
                json segs = json::array();
                for (const auto& s : comb.sigma) segs.push_back({s.a.x(), s.a.y(), s.b.x(), s.b.y()});
                meta["sigma"] = segs;
                emit(g, meta.dump(2) + "\n");
            } else {
                std::ostringstream s;
                write_segments(s, comb.sigma);
                emit(g, s.str());
                std::cerr << meta.dump() << '\n';
            }
            return 0;
        }
        if (*verify_cmd) {
            std::vector<VerifyCase> cases;
            if (!verify_sigma.empty()) {
                VerifyCase vc;
                vc.name = "sigma";
                vc.problem = load_or_default(g);
                vc.sigma = load_segments(verify_sigma);
                cases.push_back(std::move(vc));
            }
            if (verify_length > 0.0) {
                VerifyCase vc;
                vc.name = "comb";
                vc.problem = load_or_default(g);
                if (!vc.problem.anisotropy.is_constant()) throw ParameterError("comb verification needs constant A");
                Square sq;
                sq.lo = Point(0, 0);
                sq.side = 1.0;
                const Comb comb = build_comb(sq, measure_from(parse_list(verify_angles), parse_list(verify_weights)),
                                             vc.problem.anisotropy(Point(0.5, 0.5)), verify_length, true);
                vc.problem.domain = Domain::unit_square();
                vc.problem.h = grid_spacing_for(vc.problem, comb.min_spacing, verify_res);
                vc.sigma = comb.sigma;
                vc.cells = comb.cells;
                vc.feature_spacing = comb.min_spacing;
                cases.push_back(std::move(vc));
            }
            if (random_n > 0) {
                auto more = random_comb_cases(random_n, g.seed, verify_cmd->count("--resolution") ? verify_res : 8.0);
                for (auto& c : more) cases.push_back(std::move(c));
            }
            if (cases.empty()) throw ParameterError("verify needs --sigma, --comb-length or --random");
            VerifyOptions opts;
            opts.upper_scale = upper_scale;
            bool ok = true;
            const Table t = run_verify(cases, opts, ok);
            emit_table(g, t, false);
            return ok ? 0 : 1;
        }

        ExperimentConfig cfg;
        cfg.problem = load_or_default(g);
        cfg.lengths = parse_list(lengths);
        cfg.lattice = lattice;
        cfg.resolution = resolution;
        cfg.partition = partition;
        cfg.seed = g.seed;
        cfg.path = solve_path_from_string(exp_path);
        if (*asym_cmd) {
            emit_table(g, run_asymptotics(cfg), true);
            return 0;
        }
        if (*dens_cmd) {
            emit_table(g, run_density_stats(cfg), true);
            return 0;
        }
        if (*scale_cmd) {
            SegmentSet sigma =
                scaling_sigma.empty() ? SegmentSet(cfg.problem.domain.boundary()) : load_segments(scaling_sigma);
            emit_table(g, run_scaling_fit(cfg, sigma), true);
            return 0;
        }
    } catch (const pscomb::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
