#include "pscomb/solver.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace pscomb {

void DirichletMask::constrain(int node, int source) {
    if (constrained[node]) return;
    constrained[node] = 1;
    provenance[node] = source;
    ++constrained_count;
}

namespace {

double point_segment_distance(const Point& x, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (x - s.a).norm();
    const double t = std::clamp((x - s.a).dot(d) / len2, 0.0, 1.0);
    return (x - (s.a + t * d)).norm();
}

}  // namespace

DirichletMask rasterize(const SegmentSet& sigma, const Grid& grid, double feature_spacing) {
    DirichletMask mask;
    mask.constrained.assign(grid.node_count(), 0);
    mask.provenance.assign(grid.node_count(), -1);
    const double h = grid.h();
    const double radius = 0.5 * h * (1.0 + 1e-9);
    if (feature_spacing > 0.0 && h > 0.5 * feature_spacing) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "grid spacing %.6g exceeds half the feature spacing %.6g", h, feature_spacing);
        mask.warnings.emplace_back(buf);
    }
    const Point o = grid.origin();
    const auto& segs = sigma.segments();
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const Point lo = segs[k].a.cwiseMin(segs[k].b).array() - radius;
        const Point hi = segs[k].a.cwiseMax(segs[k].b).array() + radius;
        const int i0 = std::max(0, static_cast<int>(std::ceil((lo.x() - o.x()) / h - 1e-9)));
        const int i1 = std::min(grid.lattice_nx() - 1, static_cast<int>(std::floor((hi.x() - o.x()) / h + 1e-9)));
        const int j0 = std::max(0, static_cast<int>(std::ceil((lo.y() - o.y()) / h - 1e-9)));
        const int j1 = std::min(grid.lattice_ny() - 1, static_cast<int>(std::floor((hi.y() - o.y()) / h + 1e-9)));
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) {
                const int node = grid.node_at(i, j);
                if (node < 0 || mask.constrained[node]) continue;
                if (point_segment_distance(grid.nodes()[node], segs[k]) <= radius)
                    mask.constrain(node, static_cast<int>(k));
            }
    }
    if (!sigma.empty() && mask.constrained_count == 0)
        throw GeometryError("Dirichlet region does not meet the closed domain on the grid");
    return mask;
}

std::string to_string(SolvePath path) {
    switch (path) {
        case SolvePath::automatic: return "auto";
        case SolvePath::eigen: return "eigen";
        case SolvePath::compliance: return "compliance";
        case SolvePath::general: return "general";
    }
    return "auto";
}

SolvePath solve_path_from_string(const std::string& s) {
    if (s == "auto") return SolvePath::automatic;
    if (s == "eigen") return SolvePath::eigen;
    if (s == "compliance") return SolvePath::compliance;
    if (s == "general") return SolvePath::general;
    throw ParameterError("unknown solve path '" + s + "'");
}

namespace {

// Free-node numbering plus helpers to move between full and reduced vectors.
struct Reduced {
    std::vector<int> free_nodes;
    std::vector<int> index;  // -1 when constrained

    Reduced(const Grid& grid, const DirichletMask& mask) {
        if (mask.size() != grid.node_count()) throw ParameterError("mask does not match the grid");
        index.assign(grid.node_count(), -1);
        for (int i = 0; i < grid.node_count(); ++i)
            if (!mask.constrained[i]) {
                index[i] = static_cast<int>(free_nodes.size());
                free_nodes.push_back(i);
            }
        if (free_nodes.empty()) throw TrivialSpaceError("every node is constrained");
    }
    int size() const { return static_cast<int>(free_nodes.size()); }
    Eigen::VectorXd restrict_vec(const Eigen::VectorXd& full) const {
        Eigen::VectorXd r(size());
        for (int k = 0; k < size(); ++k) r(k) = full(free_nodes[k]);
        return r;
    }
    Eigen::VectorXd extend(const Eigen::VectorXd& red, int n) const {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < size(); ++k) f(free_nodes[k]) = red(k);
        return f;
    }
    SparseMatrix restrict_mat(const SparseMatrix& full) const {
        std::vector<Eigen::Triplet<double>> trip;
        for (int c = 0; c < full.outerSize(); ++c)
            for (SparseMatrix::InnerIterator it(full, c); it; ++it) {
                const int r = index[it.row()], col = index[it.col()];
                if (r >= 0 && col >= 0) trip.emplace_back(r, col, it.value());
            }
        SparseMatrix m(size(), size());
        m.setFromTriplets(trip.begin(), trip.end());
        return m;
    }
};

// Lattice neighbours sharing a cell edge.
std::vector<std::vector<int>> node_neighbours(const Grid& grid) {
    std::vector<std::vector<int>> nb(grid.node_count());
    auto link = [&](int a, int b) {
        if (std::find(nb[a].begin(), nb[a].end(), b) == nb[a].end()) {
            nb[a].push_back(b);
            nb[b].push_back(a);
        }
    };
    for (const auto& c : grid.cells()) {
        link(c.nodes[0], c.nodes[1]);
        link(c.nodes[0], c.nodes[2]);
        link(c.nodes[1], c.nodes[3]);
        link(c.nodes[2], c.nodes[3]);
    }
    return nb;
}

// Grid distance (in units of h) to the constrained set. Throws if some free
// node cannot reach a constrained node, since the quotient is then unbounded.
Eigen::VectorXd distance_to_mask(const Grid& grid, const DirichletMask& mask) {
    const auto nb = node_neighbours(grid);
    Eigen::VectorXd dist = Eigen::VectorXd::Constant(grid.node_count(), -1.0);
    std::deque<int> queue;
    for (int i = 0; i < grid.node_count(); ++i)
        if (mask.constrained[i]) {
            dist(i) = 0.0;
            queue.push_back(i);
        }
    while (!queue.empty()) {
        const int a = queue.front();
        queue.pop_front();
        for (int b : nb[a])
            if (dist(b) < 0.0) {
                dist(b) = dist(a) + 1.0;
                queue.push_back(b);
            }
    }
    for (int i = 0; i < grid.node_count(); ++i)
        if (dist(i) < 0.0) throw GeometryError("part of the domain is not connected to the Dirichlet region");
    return dist * grid.h();
}

void fix_sign(Eigen::VectorXd& u, const Eigen::VectorXd& mass) {
    if (u.dot(mass) < 0.0) u = -u;
}

using CgSolver = Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                          Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::AMDOrdering<int>>>;

void setup_cg(CgSolver& cg, const SparseMatrix& k) {
    cg.setTolerance(1e-13);
    cg.setMaxIterations(std::max<int>(2000, 4 * static_cast<int>(std::sqrt(double(k.rows()))) * 20));
    cg.compute(k);
    if (cg.info() != Eigen::Success) throw ConvergenceError("incomplete Cholesky factorization failed", {});
}

Eigen::VectorXd cg_solve(const CgSolver& cg, const Eigen::VectorXd& b, const Eigen::VectorXd& guess) {
    Eigen::VectorXd x = cg.solveWithGuess(b, guess);
    if (cg.info() != Eigen::Success && cg.error() > 1e-8)
        throw ConvergenceError("conjugate gradient did not converge", x);
    return x;
}

}  // namespace

namespace {

struct EigenPair {
    double lambda = 0.0;
    Eigen::VectorXd u;
    int iterations = 0;
    double residual = 1.0;
    bool converged = false;
};

// Smallest eigenpair of k u = lambda diag(m) u by block inverse iteration
// with a Rayleigh-Ritz step; the block makes near-degenerate pairs harmless.
template <class Solver>
EigenPair inverse_iteration(const SparseMatrix& k, const Eigen::VectorXd& m, Eigen::VectorXd u, Solver&& apply_inverse,
                            int block, double loose) {
    EigenPair out;
    const Eigen::Index n = u.size();
    if (!(u.norm() > 0.0)) u.setOnes();
    if (n <= block) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(k), Eigen::MatrixXd(m.asDiagonal()));
        out.lambda = es.eigenvalues()(0);
        out.u = es.eigenvectors().col(0);
        out.iterations = 1;
        out.residual = 0.0;
        out.converged = true;
        return out;
    }
    Eigen::MatrixXd x(n, block);
    x.col(0) = u;
    for (int j = 1; j < block; ++j)
        for (Eigen::Index i = 0; i < n; ++i) x(i, j) = u(i) * std::cos(0.7 * j * double(i) + j);
    double lambda = std::numeric_limits<double>::infinity();
    const int max_iter = 20000;
    int it = 0;
    for (; it < max_iter; ++it) {
        Eigen::MatrixXd y(n, block);
        for (int j = 0; j < block; ++j) y.col(j) = apply_inverse(m.cwiseProduct(x.col(j)), x.col(j));
        const Eigen::MatrixXd ky = k * y;
        const Eigen::MatrixXd kr = y.transpose() * ky;
        const Eigen::MatrixXd mr = y.transpose() * m.asDiagonal() * y;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (kr + kr.transpose()),
                                                                    0.5 * (mr + mr.transpose()));
        if (es.info() != Eigen::Success) break;
        x = y * es.eigenvectors();
        for (int j = 0; j < block; ++j) x.col(j) /= std::sqrt(x.col(j).dot(m.cwiseProduct(x.col(j))));
        const Eigen::VectorXd v = x.col(0);
        const Eigen::VectorXd kv = k * v;
        const double next = v.dot(kv);
        const Eigen::VectorXd mv = next * m.cwiseProduct(v);
        out.residual = (kv - mv).norm() / mv.norm();
        const double rel = std::abs(next - lambda) / next;
        lambda = next;
        if (rel < 1e-10 && out.residual < 1e-9) break;
        // Clustered spectra: the eigenvalue settles long before the vector.
        if (rel < 1e-12 && out.residual < 1e-7) break;
        if (it > 200 && rel < 1e-13) break;
        if (rel < loose) break;
    }
    out.converged = it < max_iter;
    out.iterations = std::min(it + 1, max_iter);
    out.lambda = lambda;
    out.u = x.col(0);
    return out;
}

// Connected components of the sparsity graph of a symmetric matrix.
std::vector<std::vector<int>> coupled_components(const SparseMatrix& k) {
    const int n = static_cast<int>(k.rows());
    std::vector<int> label(n, -1);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < n; ++s) {
        if (label[s] >= 0) continue;
        std::vector<int> comp{s};
        label[s] = static_cast<int>(comps.size());
        for (std::size_t h = 0; h < comp.size(); ++h)
            for (SparseMatrix::InnerIterator it(k, comp[h]); it; ++it) {
                const int r = static_cast<int>(it.row());
                if (label[r] < 0 && it.value() != 0.0) {
                    label[r] = label[s];
                    comp.push_back(r);
                }
            }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

SparseMatrix sub_matrix(const SparseMatrix& k, const std::vector<int>& idx) {
    std::vector<int> local(k.rows(), -1);
    for (std::size_t i = 0; i < idx.size(); ++i) local[idx[i]] = static_cast<int>(i);
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (SparseMatrix::InnerIterator it(k, idx[i]); it; ++it)
            if (local[it.row()] >= 0) trip.emplace_back(local[it.row()], static_cast<int>(i), it.value());
    SparseMatrix s(idx.size(), idx.size());
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

}  // namespace

SolveReport solve_linear_eigen(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask) {
    if (problem.p() != 2.0 || problem.q() != 2.0) throw RegimeError("the eigen path needs p = q = 2");
    const Reduced red(grid, mask);
    const Eigen::VectorXd dist = distance_to_mask(grid, mask);
    const EnergyAssembler asmb(problem, grid);
    const SparseMatrix k = red.restrict_mat(asmb.stiffness());
    const Eigen::VectorXd m = red.restrict_vec(asmb.mass());
    const Eigen::VectorXd u0 = red.restrict_vec(dist);
    SolveReport rep;
    rep.path = SolvePath::eigen;
    rep.h = grid.h();

    // The free region of a comb splits into many nearly congruent pieces whose
    // eigenvalues are almost equal; solving piece by piece avoids the stall.
    const auto comps = coupled_components(k);
    EigenPair best;
    best.lambda = std::numeric_limits<double>::infinity();
    std::vector<int> best_idx;
    int total_iter = 0;
    // Periodic combs give many pieces with identical matrices; each distinct
    // piece is solved once.
    struct Piece {
        SparseMatrix k;
        Eigen::VectorXd m, u0;
    };
    auto extract = [&](const std::vector<int>& idx) {
        Piece pc;
        pc.k = sub_matrix(k, idx);
        pc.m.resize(idx.size());
        pc.u0.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            pc.m(i) = m(idx[i]);
            pc.u0(i) = u0(idx[i]);
        }
        return pc;
    };
    auto same = [](const Piece& a, const Piece& b) {
        if (a.m.size() != b.m.size() || a.k.nonZeros() != b.k.nonZeros()) return false;
        if (a.m != b.m) return false;
        for (int c = 0; c < a.k.outerSize(); ++c) {
            SparseMatrix::InnerIterator ia(a.k, c), ib(b.k, c);
            for (; ia && ib; ++ia, ++ib)
                if (ia.row() != ib.row() || ia.value() != ib.value()) return false;
            if (ia || ib) return false;
        }
        return true;
    };
    auto run = [&](const Piece& pc, const Eigen::VectorXd& start, double loose) {
        EigenPair ep;
        if (comps.size() == 1) {
            CgSolver cg;
            setup_cg(cg, pc.k);
            ep = inverse_iteration(
                pc.k, pc.m, start,
                [&](const Eigen::VectorXd& b, const Eigen::VectorXd& guess) { return cg_solve(cg, b, guess); }, 1, loose);
        } else {
            Eigen::SimplicialLDLT<SparseMatrix> ldlt(pc.k);
            if (ldlt.info() != Eigen::Success) throw ConvergenceError("stiffness factorization failed", {});
            ep = inverse_iteration(
                pc.k, pc.m, start,
                [&](const Eigen::VectorXd& b, const Eigen::VectorXd&) { return Eigen::VectorXd(ldlt.solve(b)); }, 8,
                loose);
        }
        total_iter += ep.iterations;
        if (!ep.converged) throw ConvergenceError("inverse iteration did not converge", {});
        return ep;
    };
    // Loose pass over the distinct pieces, then full accuracy for contenders.
    std::map<std::pair<long, double>, std::vector<std::size_t>> buckets;  // (size, trace) -> distinct pieces
    std::vector<Piece> pieces;
    std::vector<std::size_t> owner;
    std::vector<EigenPair> coarse;
    const double loose = comps.size() == 1 ? 0.0 : 1e-6;
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& idx : comps) {
        Piece pc = comps.size() == 1 ? Piece{k, m, u0} : extract(idx);
        auto& bucket = buckets[{static_cast<long>(pc.m.size()), pc.m.sum() + pc.k.diagonal().sum()}];
        bool seen = false;
        for (std::size_t other : bucket)
            if (same(pc, pieces[other])) {
                seen = true;
                break;
            }
        if (seen) continue;
        coarse.push_back(run(pc, pc.u0, loose));
        lowest = std::min(lowest, coarse.back().lambda);
        bucket.push_back(pieces.size());
        owner.push_back(&idx - comps.data());
        pieces.push_back(std::move(pc));
    }
    for (std::size_t c = 0; c < pieces.size(); ++c) {
        if (coarse[c].lambda > 1.02 * lowest) continue;
        EigenPair ep = loose > 0.0 ? run(pieces[c], coarse[c].u, 0.0) : std::move(coarse[c]);
        if (ep.lambda < best.lambda) {
            best = std::move(ep);
            best_idx = comps[owner[c]];
        }
    }
    Eigen::VectorXd u = Eigen::VectorXd::Zero(red.size());
    for (std::size_t i = 0; i < best_idx.size(); ++i) u(best_idx[i]) = best.u(i);
    rep.u = red.extend(u, grid.node_count());
    fix_sign(rep.u, asmb.mass());
    rep.lambda = best.lambda;
    rep.C = 1.0 / best.lambda;
    rep.iterations = total_iter;
    rep.residual = best.residual;
    return rep;
}

SolveReport solve_compliance(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask) {
    if (problem.q() != 1.0) throw RegimeError("the compliance path needs q = 1");
    const double p = problem.p();
    const Reduced red(grid, mask);
    distance_to_mask(grid, mask);
    const EnergyAssembler asmb(problem, grid);
    const SparseMatrix k = red.restrict_mat(asmb.stiffness());
    const Eigen::VectorXd b = red.restrict_vec(asmb.mass());
    SolveReport rep;
    rep.path = SolvePath::compliance;
    rep.h = grid.h();

    CgSolver cg;
    setup_cg(cg, k);
    Eigen::VectorXd u = cg_solve(cg, b, Eigen::VectorXd::Zero(b.size()));
    rep.iterations = 1;

    if (p != 2.0) {
        // Minimize E(u) - p b.u by preconditioned Barzilai-Borwein steps with a
        // nonmonotone Armijo safeguard, from the best multiple of the p = 2 state.
        Eigen::SimplicialLDLT<SparseMatrix> pre(k);
        if (pre.info() != Eigen::Success) throw ConvergenceError("stiffness factorization failed", {});
        const int n = grid.node_count();
        auto objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd* grad) {
            const Eigen::VectorXd full = red.extend(v, n);
            double e;
            if (grad) {
                Eigen::VectorXd gf;
                e = asmb.energy_gradient(full, gf);
                *grad = red.restrict_vec(gf) - p * b;
            } else {
                e = asmb.energy(full);
            }
            return e - p * b.dot(v);
        };
        const double e0 = asmb.energy(red.extend(u, n));
        u *= std::pow(b.dot(u) / e0, 1.0 / (p - 1.0));
        const double scale = std::sqrt(b.dot(pre.solve(b))) * p;
        Eigen::VectorXd g;
        double j = objective(u, &g);
        Eigen::VectorXd d = pre.solve(g);
        double alpha = 1.0 / std::max(1.0, (p - 1.0));
        std::deque<double> history{j};
        int it = 0;
        const int max_iter = 100000;
        for (; it < max_iter; ++it) {
            const double dual = std::sqrt(std::max(0.0, g.dot(d)));
            if (dual <= 1e-10 * scale) break;
            const double ref = *std::max_element(history.begin(), history.end());
            Eigen::VectorXd trial, gt;
            double jt = 0.0;
            int backtracks = 0;
            for (;;) {
                trial = u - alpha * d;
                jt = objective(trial, &gt);
                if (std::isfinite(jt) && jt <= ref - 1e-4 * alpha * g.dot(d)) break;
                alpha *= 0.5;
                if (++backtracks > 60) break;
            }
            if (backtracks > 60) break;  // no representable decrease left
            const Eigen::VectorXd s = trial - u;
            const Eigen::VectorXd y = gt - g;
            const Eigen::VectorXd dt = pre.solve(gt);
            const double sy = s.dot(y);
            // BB step in the stiffness metric: alpha = s.K s / s.y.
            alpha = sy > 0.0 ? s.dot(k * s) / sy : 2.0 * alpha;
            u = std::move(trial);
            g = std::move(gt);
            d = dt;
            j = jt;
            history.push_back(j);
            if (history.size() > 10) history.pop_front();
        }
        if (it >= max_iter)
            throw ConvergenceError("compliance descent did not converge", red.extend(u, grid.node_count()));
        rep.iterations = it + 1;
    }
    rep.u = red.extend(u, grid.node_count());
    const double work = b.dot(u);
    rep.C = std::pow(work, p - 1.0);
    rep.lambda = 1.0 / rep.C;
    rep.residual = euler_lagrange_residual(rep, problem, grid, mask);
    return rep;
}

SolveReport solve_rayleigh(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask) {
    const double p = problem.p(), q = problem.q();
    const Reduced red(grid, mask);
    const int n = grid.node_count();
    const Eigen::VectorXd dist = distance_to_mask(grid, mask);
    const EnergyAssembler asmb(problem, grid);
    const SparseMatrix k = red.restrict_mat(asmb.stiffness());
    const Eigen::VectorXd w = red.restrict_vec(asmb.mass());
    Eigen::SimplicialLDLT<SparseMatrix> pre(k);
    if (pre.info() != Eigen::Success) throw ConvergenceError("stiffness factorization failed", {});

    auto numer = [&](const Eigen::VectorXd& v) { return w.dot(v.cwiseAbs().array().pow(q).matrix()); };
    auto numer_grad = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd g(v.size());
        for (int i = 0; i < v.size(); ++i)
            g(i) = q * w(i) * std::pow(std::abs(v(i)), q - 1.0) * (v(i) > 0.0 ? 1.0 : (v(i) < 0.0 ? -1.0 : 0.0));
        return g;
    };
    auto log_quotient = [&](const Eigen::VectorXd& v, double* e_out) {
        const double e = asmb.energy(red.extend(v, n));
        if (e_out) *e_out = e;
        return (p / q) * std::log(numer(v)) - std::log(e);
    };
    auto normalize = [&](Eigen::VectorXd& v) { v /= std::pow(numer(v), 1.0 / q); };

    Eigen::VectorXd u = red.restrict_vec(dist);
    if (!(u.maxCoeff() > 0.0)) u.setOnes();
    normalize(u);
    double e = 0.0;
    double lq = log_quotient(u, &e);
    double alpha = e / p;
    int calm = 0;
    int it = 0;
    const int max_iter = 100000;
    SolveReport rep;
    rep.path = SolvePath::general;
    rep.h = grid.h();
    for (; it < max_iter; ++it) {
        Eigen::VectorXd ge_full;
        asmb.energy_gradient(red.extend(u, n), ge_full);
        const Eigen::VectorXd ge = red.restrict_vec(ge_full);
        const Eigen::VectorXd g = (p / q) * numer_grad(u) / numer(u) - ge / e;
        const Eigen::VectorXd d = pre.solve(g);
        const double slope = g.dot(d);
        if (!(slope > 0.0)) break;
        alpha *= 2.0;
        Eigen::VectorXd trial;
        double lt = 0.0, et = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            trial = u + alpha * d;
            lt = log_quotient(trial, &et);
            if (std::isfinite(lt) && lt >= lq + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
        const double scale = std::pow(numer(trial), 1.0 / q);
        trial /= scale;
        et /= std::pow(scale, p);
        const double rel = std::expm1(lt - lq);
        u = std::move(trial);
        lq = lt;
        e = et;
        calm = rel < 1e-9 ? calm + 1 : 0;
        if (calm >= 3) {
            rep.u = red.extend(u, n);
            rep.C = std::exp(lq);
            rep.lambda = 1.0 / rep.C;
            const double res = euler_lagrange_residual(rep, problem, grid, mask);
            if (res < 1e-6 || calm >= 50) break;
        }
    }
    if (it >= max_iter) throw ConvergenceError("Rayleigh ascent did not converge", red.extend(u, n));
    rep.u = red.extend(u, n);
    fix_sign(rep.u, asmb.mass());
    rep.C = std::exp(lq);
    rep.lambda = 1.0 / rep.C;
    rep.iterations = it + 1;
    rep.residual = euler_lagrange_residual(rep, problem, grid, mask);
    return rep;
}

SolveReport solve(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask, SolvePath path) {
    if (path == SolvePath::automatic) {
        if (problem.p() == 2.0 && problem.q() == 2.0)
            path = SolvePath::eigen;
        else if (problem.q() == 1.0)
            path = SolvePath::compliance;
        else
            path = SolvePath::general;
    }
    switch (path) {
        case SolvePath::eigen: return solve_linear_eigen(problem, grid, mask);
        case SolvePath::compliance: return solve_compliance(problem, grid, mask);
        default: return solve_rayleigh(problem, grid, mask);
    }
}

SolveReport solve(const ProblemSpec& problem, const SegmentSet& sigma, SolvePath path, double feature_spacing) {
    const Grid grid = build_grid(problem.domain, problem.h);
    const DirichletMask mask = rasterize(sigma, grid, feature_spacing);
    return solve(problem, grid, mask, path);
}

double euler_lagrange_residual(const SolveReport& report, const ProblemSpec& problem, const Grid& grid,
                               const DirichletMask& mask) {
    const double p = problem.p(), q = problem.q();
    const EnergyAssembler asmb(problem, grid);
    Eigen::VectorXd ge;
    asmb.energy_gradient(report.u, ge);
    const Eigen::VectorXd& w = asmb.mass();
    double numer = 0.0;
    for (int i = 0; i < grid.node_count(); ++i)
        if (!mask.constrained[i]) numer += w(i) * std::pow(std::abs(report.u(i)), q);
    const double lambda = report.C > 0.0 ? 1.0 / report.C : report.lambda;
    const double factor = lambda * std::pow(numer, (p - q) / q);
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < grid.node_count(); ++i) {
        if (mask.constrained[i]) continue;
        const double ui = report.u(i);
        const double phi = ui == 0.0 ? 0.0 : std::pow(std::abs(ui), q - 1.0) * (ui > 0.0 ? 1.0 : -1.0);
        const double rhs = factor * w(i) * phi;
        const double r = ge(i) / p - rhs;
        rn += r * r;
        bn += rhs * rhs;
    }
    if (bn == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(rn / bn);
}

}  // namespace pscomb
