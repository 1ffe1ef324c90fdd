#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pscomb/errors.hpp"
#include "pscomb/types.hpp"

namespace pscomb {

enum class Regime { sub, homogeneous, super };

std::string to_string(Regime r);

/// Exponents (p, q) of the quotient (int f|u|^q)^{p/q} / int |A grad u . grad u|^{p/2}.
struct ExponentPair {
    double p = 2.0;
    double q = 2.0;
    Regime regime = Regime::homogeneous;

    /// Validates 1 < p < inf, q >= 1 and tags the regime.
    static ExponentPair make(double p, double q);

    void require(Regime expected) const;
    /// p/q - 1: the area exponent of strip formulas.
    double area_exponent() const { return p / q - 1.0; }
    /// p + 2p/q - 2: the exponent of the dilation law.
    double scaling_exponent() const { return p + 2.0 * p / q - 2.0; }
};

/// Finite union of axis-aligned rectangles with pairwise disjoint interiors.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<Rect> rects);

    static Domain unit_square() { return Domain({Rect{Point(0, 0), Point(1, 1)}}); }
    static Domain rectangle(double w, double h) { return Domain({Rect{Point(0, 0), Point(w, h)}}); }

    const std::vector<Rect>& rects() const { return rects_; }
    double area() const;
    Rect bounding_box() const;
    bool contains(const Point& x, double tol = 1e-12) const;
    bool contains_open(const Point& x) const;
    /// Area of the domain inside an arbitrary rectangle.
    double area_in(const Rect& r) const;
    /// Pieces of the domain inside a rectangle (one per intersecting rectangle).
    std::vector<Rect> clip(const Rect& r) const;
    /// Boundary of the union, as axis-aligned segments.
    std::vector<Segment> boundary() const;
    Domain scaled(double t) const;

private:
    std::vector<Rect> rects_;
};

/// Closed-form eigen data of a symmetric positive definite 2x2 matrix.
template <typename Scalar>
struct SymmetricEigen2 {
    Scalar a_min;
    Scalar a_max;
    Eigen::Matrix<Scalar, 2, 1> xi_max;
};

/// Eigenvalues and the maximal eigenvector of a 2x2 SPD matrix. The
/// eigenvector has a nonnegative first component ((1,0) when isotropic).
template <typename Scalar>
SymmetricEigen2<Scalar> eigen_decompose(const Eigen::Matrix<Scalar, 2, 2>& a) {
    using std::abs;
    using std::hypot;
    const Scalar a11 = a(0, 0), a22 = a(1, 1);
    const Scalar a12 = Scalar(0.5) * (a(0, 1) + a(1, 0));
    const Scalar tr = a11 + a22;
    const Scalar det = a11 * a22 - a12 * a12;
    if (!(tr > Scalar(0)) || !(det > Scalar(0)))
        throw DefinitenessError("matrix is not positive definite");
    const Scalar mean = Scalar(0.5) * tr;
    const Scalar rad = hypot(Scalar(0.5) * (a11 - a22), a12);
    SymmetricEigen2<Scalar> out;
    out.a_max = mean + rad;
    out.a_min = det / out.a_max;
    if (rad <= Scalar(0)) {
        out.xi_max << Scalar(1), Scalar(0);
        return out;
    }
    Eigen::Matrix<Scalar, 2, 1> v1(a12, out.a_max - a11);
    Eigen::Matrix<Scalar, 2, 1> v2(out.a_max - a22, a12);
    Eigen::Matrix<Scalar, 2, 1> v = v1.squaredNorm() >= v2.squaredNorm() ? v1 : v2;
    v.normalize();
    if (v(0) < Scalar(0) || (v(0) == Scalar(0) && v(1) < Scalar(0))) v = -v;
    out.xi_max = v;
    return out;
}

/// Symmetric 2x2 matrix field A(x).
class AnisotropyField {
public:
    using Evaluator = std::function<Eigen::Matrix2d(const Point&)>;

    AnisotropyField() : AnisotropyField(constant(Eigen::Matrix2d::Identity())) {}
    AnisotropyField(Evaluator eval, bool is_constant, std::string description = {});

    static AnisotropyField constant(const Eigen::Matrix2d& a);
    static AnisotropyField identity() { return constant(Eigen::Matrix2d::Identity()); }
    static AnisotropyField diagonal(double a11, double a22);
    /// A(x) = base + x1 * d1 + x2 * d2 (entries a11, a12, a22).
    static AnisotropyField affine(const Eigen::Vector3d& base, const Eigen::Vector3d& d1, const Eigen::Vector3d& d2);
    /// A(x) = base + amplitude * (1 - |x-c|^2/r^2)^2 inside the disc, base outside.
    static AnisotropyField radial_bump(const Eigen::Vector3d& base, const Eigen::Vector3d& amplitude, const Point& center,
                                       double radius);
    /// Bilinear interpolation of entries sampled on a regular grid.
    /// `samples` is row-major, nx*ny rows of (a11, a12, a22).
    static AnisotropyField grid_samples(const Point& origin, double spacing, int nx, int ny,
                                        std::vector<Eigen::Vector3d> samples);

    Eigen::Matrix2d operator()(const Point& x) const { return eval_(x); }
    bool is_constant() const { return constant_; }
    const std::string& description() const { return description_; }

private:
    Evaluator eval_;
    bool constant_ = false;
    std::string description_;
};

/// Positive scalar forcing f(x).
class ForcingField {
public:
    using Evaluator = std::function<double(const Point&)>;

    ForcingField() : ForcingField(constant(1.0)) {}
    ForcingField(Evaluator eval, bool is_constant, std::string description = {});

    static ForcingField constant(double value);
    static ForcingField affine(double value, const Point& gradient);
    static ForcingField radial_bump(double base, double amplitude, const Point& center, double radius);
    static ForcingField grid_samples(const Point& origin, double spacing, int nx, int ny, std::vector<double> samples);

    double operator()(const Point& x) const { return eval_(x); }
    bool is_constant() const { return constant_; }
    const std::string& description() const { return description_; }

private:
    Evaluator eval_;
    bool constant_ = false;
    std::string description_;
};

struct EllipticityBounds {
    double kappa0;
    double kappa1;
};

/// Deterministic, prefix-nested sample points of the closed domain: the
/// rectangle corners first, then a Halton sequence over the bounding box.
std::vector<Point> domain_samples(const Domain& domain, int sample_count);

/// kappa0 = min a_min, kappa1 = max a_max over `sample_count` samples.
EllipticityBounds check_ellipticity(const AnisotropyField& field, const Domain& domain, int sample_count);

/// Minimum of f over the samples; throws ParameterError with the offending
/// coordinate if f is not positive.
double check_forcing(const ForcingField& field, const Domain& domain, int sample_count);

/// Largest |F(x)-F(y)|/|x-y| over nearby probe pairs, with |.| the max-entry
/// norm. A crude modulus-of-continuity probe for user-supplied fields.
double continuity_probe(const AnisotropyField& field, const Domain& domain, int sample_count, double probe_distance);

/// Uniform lattice of spacing h restricted to the closed domain.
class Grid {
public:
    struct Cell {
        std::array<int, 4> nodes;  // (0,0), (1,0), (0,1), (1,1) corners
        Point center;
    };

    double h() const { return h_; }
    const Point& origin() const { return origin_; }
    int lattice_nx() const { return nx_; }
    int lattice_ny() const { return ny_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<Cell>& cells() const { return cells_; }
    /// Node index at lattice position (i, j), or -1 outside the domain.
    int node_at(int i, int j) const;
    int lattice_i(int node) const { return lattice_ij_[node].first; }
    int lattice_j(int node) const { return lattice_ij_[node].second; }
    bool on_boundary(int node) const { return boundary_[node] != 0; }
    /// Area share of a node: h^2/4 per adjacent cell.
    double node_weight(int node) const { return weight_[node]; }

    friend Grid build_grid(const Domain& domain, double h);

private:
    double h_ = 0.0;
    Point origin_ = Point::Zero();
    int nx_ = 0, ny_ = 0;  // lattice points per axis
    std::vector<int> lattice_to_node_;
    std::vector<std::pair<int, int>> lattice_ij_;
    std::vector<Point> nodes_;
    std::vector<Cell> cells_;
    std::vector<char> boundary_;
    std::vector<double> weight_;
};

/// Throws GridAlignmentError unless h divides every rectangle side and every
/// corner lies on the lattice anchored at the bounding-box corner.
Grid build_grid(const Domain& domain, double h);

/// Everything that defines one Poincare-Sobolev constant except the Dirichlet region.
struct ProblemSpec {
    ExponentPair exponents = ExponentPair::make(2.0, 2.0);
    Domain domain = Domain::unit_square();
    AnisotropyField anisotropy;
    ForcingField forcing;
    double h = 1.0 / 64.0;

    /// Canonical text form of the problem data (fields by description).
    std::string describe() const;

    double p() const { return exponents.p; }
    double q() const { return exponents.q; }
};

/// FNV-1a hash of ProblemSpec::describe(), as 16 hex digits.
std::string problem_hash(const ProblemSpec& problem);

}  // namespace pscomb
