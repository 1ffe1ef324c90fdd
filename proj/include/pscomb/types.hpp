#pragma once

#include <algorithm>

#include <Eigen/Core>

namespace pscomb {

using Point = Eigen::Vector2d;

/// Axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y].
struct Rect {
    Point lo;
    Point hi;

    double width() const { return hi.x() - lo.x(); }
    double height() const { return hi.y() - lo.y(); }
    double area() const { return width() * height(); }
    Point center() const { return 0.5 * (lo + hi); }

    bool contains(const Point& x, double tol = 0.0) const {
        return x.x() >= lo.x() - tol && x.x() <= hi.x() + tol && x.y() >= lo.y() - tol && x.y() <= hi.y() + tol;
    }
    bool contains_open(const Point& x) const {
        return x.x() > lo.x() && x.x() < hi.x() && x.y() > lo.y() && x.y() < hi.y();
    }
};

/// Area of the intersection of two rectangles (0 if disjoint).
inline double overlap_area(const Rect& a, const Rect& b) {
    const double w = std::min(a.hi.x(), b.hi.x()) - std::max(a.lo.x(), b.lo.x());
    const double h = std::min(a.hi.y(), b.hi.y()) - std::max(a.lo.y(), b.lo.y());
    return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

/// Axis-aligned square used for lattices and sub-square statistics.
///
/// Clipping against a square is closed on the low sides. The high sides are
/// closed unless the corresponding flag is cleared, which lets a partition of
/// squares count every point of a segment exactly once.
struct Square {
    Point lo;
    double side = 1.0;
    bool closed_right = true;
    bool closed_top = true;

    Point hi() const { return lo + Point(side, side); }
    double area() const { return side * side; }
    Point center() const { return lo + Point(0.5 * side, 0.5 * side); }
    Rect rect() const { return Rect{lo, hi()}; }
};

struct Segment {
    Point a;
    Point b;

    double length() const { return (b - a).norm(); }
    Point midpoint() const { return 0.5 * (a + b); }
    Point tangent() const { return (b - a).normalized(); }
    /// Unit normal with the sign convention of `canonical_direction`.
    Point normal() const;
};

/// Flips a direction so that its first component is nonnegative (ties broken
/// by a nonnegative second component). Directions are defined up to sign.
inline Point canonical_direction(Point d) {
    if (d.x() < 0.0 || (d.x() == 0.0 && d.y() < 0.0)) d = -d;
    return d;
}

inline Point Segment::normal() const {
    const Point t = tangent();
    return canonical_direction(Point(-t.y(), t.x()));
}

}  // namespace pscomb
