#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pscomb/tile.hpp"

namespace pscomb {

enum class BoundKind { lower, trapezoid_upper, rectangle_exact, combined, asymptotic_upper };
std::string to_string(BoundKind k);

struct BoundReport {
    BoundKind kind = BoundKind::lower;
    double value = 0.0;
    std::map<std::string, double> inputs;
    bool vacuous = false;
};

/// Lower bound for constant A and f = 1 from the A-length, the number of
/// components and the area. delta solves 2 lenA d + N pi sqrt(det A) d^2 = area.
BoundReport lower_bound(double len_a, int components, double area, double det_a, double p, double q);

enum class TrapezoidForm { proof, statement };

/// Upper bound for a trapezoid of height h in direction xi with legs k1, k2.
/// proof:     c (|E| + (k1+k2) h / (2 sqrt(a_min) |A xi.xi|^{1/2}))^{p/q-1} (h/|A xi.xi|^{1/2})^p
/// statement: same with sqrt(a_max) in the numerator instead of 1/sqrt(a_min).
BoundReport trapezoid_upper(double area, double h, double k1, double k2, const Point& xi, const Eigen::Matrix2d& a,
                            double p, double q, TrapezoidForm form = TrapezoidForm::proof);

/// c_{p,q} |R|^{p/q-1} h^p: rectangle with Dirichlet data on two parallel sides.
double rectangle_exact(double area, double h, double p, double q);

/// Bound for any polygon with Dirichlet data on its whole boundary, from the
/// smallest rectangle enclosing B E (B = A^{-1/2}) with sides orthogonal to
/// A^{1/2} xi: c (det A^{1/2})^{p/q-1} |R|^{p/q-1} h_R^p.
BoundReport enclosure_upper(const std::vector<Point>& polygon, const Point& xi, const Eigen::Matrix2d& a, double p,
                            double q);

/// (sum C_i^{q/(p-q)})^{(p-q)/q}; sub-homogeneous only.
double combine_disconnected(const std::vector<double>& values, double p, double q);
/// max C_i.
double combine_homogeneous(const std::vector<double>& values);

/// c_{p,q} |Q|^{p+p/q-1} / (int |A y.y|^{1/2} d nu)^p.
double asymptotic_upper_comb(double area_q, const DirectionMeasure& nu, const Eigen::Matrix2d& a, double p, double q);

/// Combined upper bound over the free cells of a comb. Trapezoids use the
/// larger of the two trapezoid forms, other cells the enclosure bound; cells
/// are combined with the disconnected law (q < p) or the max (q = p).
BoundReport comb_upper(const std::vector<CombCell>& cells, const Eigen::Matrix2d& a, double p, double q);

/// Negated least-squares slope of log C against log L.
double fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace pscomb
