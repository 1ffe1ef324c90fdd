#include <cmath>

#include "pscomb/solver.hpp"

namespace pscomb {

namespace {

// Gauss points of the unit reference square; corner order (0,0), (1,0), (0,1), (1,1).
struct GaussStencil {
    // dphi[g](k, c): derivative along axis k of basis c at Gauss point g, in reference units.
    std::array<Eigen::Matrix<double, 2, 4>, 4> dphi;
    GaussStencil() {
        const double lo = 0.5 - 0.5 / std::sqrt(3.0), hi = 0.5 + 0.5 / std::sqrt(3.0);
        const double pts[4][2] = {{lo, lo}, {hi, lo}, {lo, hi}, {hi, hi}};
        for (int g = 0; g < 4; ++g) {
            const double s = pts[g][0], t = pts[g][1];
            dphi[g] << -(1 - t), (1 - t), -t, t,  //
                -(1 - s), -s, (1 - s), s;
        }
    }
};

const GaussStencil& stencil() {
    static const GaussStencil st;
    return st;
}

}  // namespace

EnergyAssembler::EnergyAssembler(const ProblemSpec& problem, const Grid& grid) : grid_(&grid), p_(problem.p()) {
    cell_a_.reserve(grid.cell_count());
    for (const auto& c : grid.cells()) {
        Eigen::Matrix2d a = problem.anisotropy(c.center);
        a = 0.5 * (a + a.transpose()).eval();
        cell_a_.push_back(a);
    }
    mass_.resize(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) mass_(i) = grid.node_weight(i) * problem.forcing(grid.nodes()[i]);
}

double EnergyAssembler::energy(const Eigen::VectorXd& u) const {
    const double h = grid_->h();
    const double w = 0.25 * h * h;
    const auto& st = stencil();
    double total = 0.0;
    const auto& cells = grid_->cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Eigen::Vector4d uc(u(cells[c].nodes[0]), u(cells[c].nodes[1]), u(cells[c].nodes[2]), u(cells[c].nodes[3]));
        double cell_sum = 0.0;
        for (int g = 0; g < 4; ++g) {
            const Eigen::Vector2d grad = st.dphi[g] * uc / h;
            const double d = grad.dot(cell_a_[c] * grad);
            if (d > 0.0) cell_sum += std::pow(d, 0.5 * p_);
        }
        total += w * cell_sum;
    }
    return total;
}

double EnergyAssembler::energy_gradient(const Eigen::VectorXd& u, Eigen::VectorXd& grad_out) const {
    const double h = grid_->h();
    const double w = 0.25 * h * h;
    const auto& st = stencil();
    grad_out.setZero(u.size());
    double total = 0.0;
    const auto& cells = grid_->cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& nodes = cells[c].nodes;
        Eigen::Vector4d uc(u(nodes[0]), u(nodes[1]), u(nodes[2]), u(nodes[3]));
        Eigen::Vector4d gc = Eigen::Vector4d::Zero();
        for (int g = 0; g < 4; ++g) {
            const Eigen::Vector2d grad = st.dphi[g] * uc / h;
            const Eigen::Vector2d ag = cell_a_[c] * grad;
            const double d = grad.dot(ag);
            if (!(d > 0.0)) continue;
            total += w * std::pow(d, 0.5 * p_);
            // d/du of d^{p/2} = p d^{p/2-1} (A g) . dg/du, dg/du = dphi / h.
            gc += w * p_ * std::pow(d, 0.5 * p_ - 1.0) * (st.dphi[g].transpose() * ag) / h;
        }
        for (int k = 0; k < 4; ++k) grad_out(nodes[k]) += gc(k);
    }
    return total;
}

Eigen::VectorXd EnergyAssembler::gauss_densities(const Eigen::VectorXd& u) const {
    const double h = grid_->h();
    const auto& st = stencil();
    const auto& cells = grid_->cells();
    Eigen::VectorXd out(4 * cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& nodes = cells[c].nodes;
        Eigen::Vector4d uc(u(nodes[0]), u(nodes[1]), u(nodes[2]), u(nodes[3]));
        for (int g = 0; g < 4; ++g) {
            const Eigen::Vector2d grad = st.dphi[g] * uc / h;
            out(4 * c + g) = grad.dot(cell_a_[c] * grad);
        }
    }
    return out;
}

SparseMatrix EnergyAssembler::weighted_stiffness(const Eigen::VectorXd& weights) const {
    const double w = 0.25;  // h^2/4 quadrature weight times 1/h^2 from both gradients
    const auto& st = stencil();
    const auto& cells = grid_->cells();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(16 * cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
        for (int g = 0; g < 4; ++g)
            local += w * weights(4 * c + g) * st.dphi[g].transpose() * cell_a_[c] * st.dphi[g];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) trip.emplace_back(cells[c].nodes[a], cells[c].nodes[b], local(a, b));
    }
    SparseMatrix k(grid_->node_count(), grid_->node_count());
    k.setFromTriplets(trip.begin(), trip.end());
    return k;
}

SparseMatrix EnergyAssembler::stiffness() const {
    return weighted_stiffness(Eigen::VectorXd::Ones(4 * grid_->cell_count()));
}

std::pair<double, Eigen::VectorXd> assemble_energy(const ProblemSpec& problem, const Grid& grid,
                                                   const Eigen::VectorXd& u) {
    EnergyAssembler assembler(problem, grid);
    Eigen::VectorXd g;
    const double e = assembler.energy_gradient(u, g);
    return {e, g};
}

}  // namespace pscomb
