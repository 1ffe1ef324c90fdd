#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pscomb/problem.hpp"
#include "pscomb/segments.hpp"

namespace pscomb {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete energy on bilinear (Q1) cells. Each cell uses A at its centre and
/// a 2x2 Gauss rule for the gradient, so E is exact for affine u.
class EnergyAssembler {
public:
    EnergyAssembler(const ProblemSpec& problem, const Grid& grid);

    double p() const { return p_; }
    const Grid& grid() const { return *grid_; }

    double energy(const Eigen::VectorXd& u) const;
    /// Energy and its exact gradient with respect to the nodal values.
    double energy_gradient(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const;
    /// Quadratic form with u^T K u equal to the energy at p = 2.
    SparseMatrix stiffness() const;
    /// Same form with each Gauss point weighted by `weights` (cells x 4).
    SparseMatrix weighted_stiffness(const Eigen::VectorXd& weights) const;
    /// Per-Gauss-point values of A g . g (cells x 4 entries).
    Eigen::VectorXd gauss_densities(const Eigen::VectorXd& u) const;
    /// Lumped mass weights w_i f(x_i), w_i = h^2/4 per adjacent cell.
    const Eigen::VectorXd& mass() const { return mass_; }

private:
    const Grid* grid_;
    double p_;
    std::vector<Eigen::Matrix2d> cell_a_;
    Eigen::VectorXd mass_;
};

/// (E, gradient) for a nodal field.
std::pair<double, Eigen::VectorXd> assemble_energy(const ProblemSpec& problem, const Grid& grid,
                                                   const Eigen::VectorXd& u);

struct DirichletMask {
    std::vector<char> constrained;  // per node
    std::vector<int> provenance;    // segment index, -1 when free
    int constrained_count = 0;
    std::vector<std::string> warnings;

    int size() const { return static_cast<int>(constrained.size()); }
    int free_count() const { return size() - constrained_count; }
    /// Adds constraints (used to build nested masks).
    void constrain(int node, int source);
};

/// A node is constrained iff its distance to sigma is at most h/2. When
/// `feature_spacing` > 0 and h exceeds half of it, a warning is recorded.
/// Throws GeometryError if a nonempty sigma constrains no node.
DirichletMask rasterize(const SegmentSet& sigma, const Grid& grid, double feature_spacing = 0.0);

enum class SolvePath { automatic, eigen, compliance, general };
std::string to_string(SolvePath path);
SolvePath solve_path_from_string(const std::string& s);

struct SolveReport {
    double C = 0.0;
    double lambda = 0.0;      // 1 / C
    Eigen::VectorXd u;        // nodal values, zero on constrained nodes
    int iterations = 0;
    double residual = 0.0;    // relative Euler-Lagrange residual
    double h = 0.0;
    SolvePath path = SolvePath::automatic;
};

SolveReport solve_linear_eigen(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask);
SolveReport solve_compliance(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask);
SolveReport solve_rayleigh(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask);

/// Dispatches on `path`; automatic picks eigen for (2,2), compliance for
/// q = 1 and the general ascent otherwise.
SolveReport solve(const ProblemSpec& problem, const Grid& grid, const DirichletMask& mask,
                  SolvePath path = SolvePath::automatic);

/// Builds the grid at problem.h, rasterizes sigma and solves.
SolveReport solve(const ProblemSpec& problem, const SegmentSet& sigma, SolvePath path = SolvePath::automatic,
                  double feature_spacing = 0.0);

/// ||(1/p) grad E - lambda N^{(p-q)/q} w f |u|^{q-2} u|| / ||rhs|| over free nodes.
double euler_lagrange_residual(const SolveReport& report, const ProblemSpec& problem, const Grid& grid,
                               const DirichletMask& mask);

}  // namespace pscomb
