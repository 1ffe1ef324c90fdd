#pragma once

#include <vector>

#include <Eigen/Core>

#include "pscomb/segments.hpp"
#include "pscomb/types.hpp"

namespace pscomb {

/// Atom of a discrete direction law; `direction` is a unit vector up to sign.
struct DirectionAtom {
    Point direction;
    double weight;
};
using DirectionMeasure = std::vector<DirectionAtom>;

/// Polygonal free component of a tile or comb.
///
/// A trapezoid has two parallel sides on consecutive comb levels (or a level
/// and a band edge); the others are "exceptional" corner pieces.
struct CombCell {
    std::vector<Point> polygon;  // counter-clockwise
    int band = 0;
    Point direction;             // normal of the parallel sides
    bool trapezoid = false;
    double height = 0.0;         // distance between the two parallel sides
    double leg1 = 0.0, leg2 = 0.0;
    double area() const;
};

/// Stacked-band comb pattern in the unit square.
struct Tile {
    int n = 0;
    std::vector<double> weights;
    std::vector<Point> directions;
    std::vector<double> spacings;
    std::vector<double> heights;
    std::vector<double> band_bottoms;  // n+1 entries, 0 and 1 at the ends
    std::vector<Segment> boundaries;   // band boundaries and the square's sides
    std::vector<Segment> combs;        // interior chords
    std::vector<CombCell> cells;

    SegmentSet segments() const;
};

/// Bands are stacked bottom-up with heights beta_j eps_j / sum beta eps. In
/// band j the chords are orthogonal to xi_j on the levels xi_j . x = c0 + k eps_j,
/// c0 the level of the band corner with the lowest x + y, strictly inside.
Tile build_tile(const std::vector<double>& weights, const std::vector<Point>& directions,
                const std::vector<double>& spacings);

struct Comb {
    SegmentSet sigma;
    Square square;
    double eps = 0.0;
    int m = 0;
    double anisotropic_mean = 0.0;  // I = sum beta_j |A xi_j . xi_j|^{1/2}
    double target_length = 0.0;
    double length_ratio = 0.0;      // H1(sigma) / ell
    double min_spacing = 0.0;       // smallest physical chord spacing or band height
    Tile tile;
    std::vector<CombCell> cells;    // physical cells (filled when requested)
};

/// m x m checkerboard of (t/m)-scaled tiles on Q with eps = (t/ell)^{2/3},
/// eps_j = eps |A xi_j . xi_j|^{1/2} and m = ceil((ell/t)^{1/3} I).
/// Throws LengthBudgetError when eps >= t or some eps_j >= 1.
Comb build_comb(const Square& q, const DirectionMeasure& nu, const Eigen::Matrix2d& a, double ell,
                bool with_cells = true);

}  // namespace pscomb
