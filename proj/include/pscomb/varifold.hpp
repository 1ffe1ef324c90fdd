#pragma once

#include <functional>
#include <vector>

#include "pscomb/problem.hpp"
#include "pscomb/segments.hpp"
#include "pscomb/tile.hpp"

namespace pscomb {

/// Direction angle in [0, pi) of a nonzero vector, antipodes identified.
double direction_angle_of(const Point& d);
inline Point direction_from_angle(double angle) { return Point(std::cos(angle), std::sin(angle)); }

struct VarifoldAtom {
    Point position;
    double angle;  // in [0, pi)
    double weight;
};

/// Atomic probability measure on position x direction.
class Varifold {
public:
    /// Throws DegenerateMeasureError unless the weights are nonnegative and
    /// sum to 1 within 1e-12.
    explicit Varifold(std::vector<VarifoldAtom> atoms);
    const std::vector<VarifoldAtom>& atoms() const { return atoms_; }

private:
    std::vector<VarifoldAtom> atoms_;
};

/// One atom per segment: midpoint, normal, length / total length.
Varifold varifold_of(const SegmentSet& sigma);

using EvenTest = std::function<double(const Point& x, const Point& y)>;

/// Sum of weight * phi(position, direction). phi must be even in y; this is
/// spot-checked on the atoms and SymmetryContractError is thrown otherwise.
double test_integral(const Varifold& theta, const EvenTest& phi);

/// Discrete direction law on a lattice square.
struct DirectionLaw {
    std::vector<DirectionAtom> atoms;
    double integrate(const std::function<double(const Point&)>& psi) const;
    /// Integral of |A y . y|^{1/2}.
    double anisotropic_mean(const Eigen::Matrix2d& a) const;
    double total_mass() const;
};

struct FittedSquare {
    int ix = 0, iy = 0;
    Square square;
    std::vector<Rect> pieces;  // the domain inside the square
    double domain_area = 0.0;
    double rho = 0.0;
    DirectionLaw nu;  // empty when rho = 0
};

/// Varifold that is piecewise constant on the lattice (t Z)^2.
struct FittedVarifold {
    double t = 1.0;
    std::vector<FittedSquare> squares;

    /// Sum of rho_i |Omega cap Q_i|.
    double normalization() const;
};

/// Lattice squares of side t that meet the domain in positive area, with
/// half-open flags cleared on edges shared with another such square.
std::vector<FittedSquare> lattice_squares(const Domain& domain, double t);

/// rho_i = theta(Q_i x S^1) / |Omega cap Q_i| and nu_i the conditional
/// direction law. Atoms on lattice lines go to the square on their right/top
/// (left-closed, bottom-closed), or to the neighbour when that square misses
/// the domain.
FittedVarifold fit_varifold(const Varifold& theta, const Domain& domain, double t);

}  // namespace pscomb
