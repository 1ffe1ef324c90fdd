#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pscomb/problem.hpp"
#include "pscomb/types.hpp"

namespace pscomb {

/// A Dirichlet region: a finite union of straight segments.
class SegmentSet {
public:
    SegmentSet() = default;
    explicit SegmentSet(std::vector<Segment> segments);

    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t size() const { return segments_.size(); }
    bool empty() const { return segments_.empty(); }
    auto begin() const { return segments_.begin(); }
    auto end() const { return segments_.end(); }

    void push_back(const Segment& s) { segments_.push_back(s); }
    void append(const SegmentSet& other);

    double total_length() const;
    Rect bounding_box() const;

    /// Same point set with collinear overlaps removed. Collinear pieces are split
    /// at every original endpoint and each elementary piece is kept once, so
    /// segment locality is preserved. Zero-length segments are dropped.
    SegmentSet canonicalized(double tol = 1e-9) const;

    SegmentSet scaled(double t) const;

    /// Membership in the admissible class of closed connected sets with total
    /// length at most L (relative slack 1e-9).
    bool admissible(double L) const;

private:
    std::vector<Segment> segments_;
};

/// Euclidean distance between two closed segments.
double segment_distance(const Segment& s, const Segment& t);

/// Number of connected components of the adjacency graph in which two
/// segments are adjacent when their distance is at most `tol`.
int connected_components(const SegmentSet& sigma, double tol = 1e-9);

/// Part of a segment inside a closed rectangle.
std::optional<Segment> clip_segment(const Segment& s, const Rect& r);

/// Part of a segment inside a square, honouring the square's half-open flags.
std::optional<Segment> clip_segment(const Segment& s, const Square& q);

/// Intersection of the set with the closed domain.
SegmentSet clip_to_domain(const SegmentSet& sigma, const Domain& domain);

/// Sum over segments of |A xi . xi|^{1/2} * length, xi the unit normal.
/// Non-constant fields use per-segment midpoint subdivision, halving until the
/// relative change drops below `rel_tol`.
double riemannian_length(const SegmentSet& sigma, const AnisotropyField& a, double rel_tol = 1e-6);

/// H1(sigma inside Q') / H1(sigma).
double subsquare_density(const SegmentSet& sigma, const Square& sub);

/// Length-weighted mean of psi(normal) over the part of sigma inside Q'.
/// Returns NaN when sigma does not meet Q'.
double orientation_statistic(const SegmentSet& sigma, const Square& sub,
                             const std::function<double(const Point&)>& psi);

/// Partition of a rectangle into n x n squares of side max(width, height)/n
/// anchored at its lower-left corner, with half-open flags set so that every
/// point is counted once.
std::vector<Square> square_partition(const Rect& box, int n);

}  // namespace pscomb
