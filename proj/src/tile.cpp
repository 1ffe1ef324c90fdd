#include "pscomb/tile.hpp"

#include <cmath>
#include <numeric>

namespace pscomb {

double CombCell::area() const {
    double twice = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const Point& a = polygon[i];
        const Point& b = polygon[(i + 1) % polygon.size()];
        twice += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * std::abs(twice);
}

SegmentSet Tile::segments() const {
    std::vector<Segment> all = boundaries;
    all.insert(all.end(), combs.begin(), combs.end());
    return SegmentSet(std::move(all)).canonicalized();
}

namespace {

// Keeps the part of the polygon where sign * (xi . x - level) >= 0.
std::vector<Point> clip_halfplane(const std::vector<Point>& poly, const Point& xi, double level, double sign) {
    std::vector<Point> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const double fa = sign * (xi.dot(a) - level), fb = sign * (xi.dot(b) - level);
        if (fa >= 0.0) out.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) {
            const double t = fa / (fa - fb);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

std::vector<Point> dedupe(const std::vector<Point>& poly, double tol) {
    std::vector<Point> out;
    for (const auto& p : poly)
        if (out.empty() || (p - out.back()).norm() > tol) out.push_back(p);
    while (out.size() > 1 && (out.front() - out.back()).norm() <= tol) out.pop_back();
    return out;
}

// Maximal chord of the rectangle on the line xi . x = c, if it has positive length.
std::optional<Segment> chord(const Rect& r, const Point& xi, double c) {
    std::vector<Point> pts;
    const double tol = 1e-12;
    if (xi.y() != 0.0)
        for (double x0 : {r.lo.x(), r.hi.x()}) {
            const double y = (c - xi.x() * x0) / xi.y();
            if (y >= r.lo.y() - tol && y <= r.hi.y() + tol) pts.emplace_back(x0, std::clamp(y, r.lo.y(), r.hi.y()));
        }
    if (xi.x() != 0.0)
        for (double y0 : {r.lo.y(), r.hi.y()}) {
            const double x = (c - xi.y() * y0) / xi.x();
            if (x >= r.lo.x() - tol && x <= r.hi.x() + tol) pts.emplace_back(std::clamp(x, r.lo.x(), r.hi.x()), y0);
        }
    if (pts.size() < 2) return std::nullopt;
    const Point tau(-xi.y(), xi.x());
    auto lo = std::min_element(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return tau.dot(a) < tau.dot(b); });
    auto hi = std::max_element(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return tau.dot(a) < tau.dot(b); });
    Segment s{*lo, *hi};
    if (s.length() <= 1e-12) return std::nullopt;
    return s;
}

CombCell classify(std::vector<Point> poly, const Point& xi, double lo, double hi, int band) {
    CombCell cell;
    cell.band = band;
    cell.direction = xi;
    cell.height = hi - lo;
    const double tol = 1e-10;
    cell.polygon = dedupe(poly, 1e-13);
    const auto& p = cell.polygon;
    const std::size_t n = p.size();
    int on_lo = -1, on_hi = -1;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = p[i];
        const Point& b = p[(i + 1) % n];
        if ((b - a).norm() <= tol) continue;
        if (std::abs(xi.dot(a) - lo) <= tol && std::abs(xi.dot(b) - lo) <= tol) on_lo = static_cast<int>(i);
        if (std::abs(xi.dot(a) - hi) <= tol && std::abs(xi.dot(b) - hi) <= tol) on_hi = static_cast<int>(i);
    }
    if (n == 4 && on_lo >= 0 && on_hi >= 0) {
        cell.trapezoid = true;
        std::vector<double> legs;
        for (std::size_t i = 0; i < n; ++i)
            if (static_cast<int>(i) != on_lo && static_cast<int>(i) != on_hi) legs.push_back((p[(i + 1) % n] - p[i]).norm());
        cell.leg1 = legs.size() > 0 ? legs[0] : 0.0;
        cell.leg2 = legs.size() > 1 ? legs[1] : 0.0;
    }
    return cell;
}

}  // namespace

Tile build_tile(const std::vector<double>& weights, const std::vector<Point>& directions,
                const std::vector<double>& spacings) {
    const std::size_t n = weights.size();
    if (n == 0) throw ParameterError("a tile needs at least one band");
    if (directions.size() != n || spacings.size() != n)
        throw ParameterError("tile weights, directions and spacings must have equal length");
    double wsum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!(weights[j] > 0.0)) throw ParameterError("tile weights must be positive");
        if (!(spacings[j] > 0.0)) throw ParameterError("tile spacings must be positive");
        if (!(spacings[j] < 1.0)) throw ParameterError("tile spacings must be below 1");
        if (!(directions[j].norm() > 0.0)) throw ParameterError("tile directions must be nonzero");
        wsum += weights[j];
    }
    if (std::abs(wsum - 1.0) > 1e-9) throw ParameterError("tile weights must sum to 1");

    Tile tile;
    tile.n = static_cast<int>(n);
    tile.weights = weights;
    tile.spacings = spacings;
    for (const auto& d : directions) tile.directions.push_back(canonical_direction(d.normalized()));
    double denom = 0.0;
    for (std::size_t j = 0; j < n; ++j) denom += weights[j] * spacings[j];
    tile.band_bottoms.push_back(0.0);
    for (std::size_t j = 0; j < n; ++j) {
        tile.heights.push_back(weights[j] * spacings[j] / denom);
        tile.band_bottoms.push_back(j + 1 == n ? 1.0 : tile.band_bottoms.back() + tile.heights.back());
    }

    for (std::size_t j = 0; j <= n; ++j)
        tile.boundaries.push_back(Segment{Point(0.0, tile.band_bottoms[j]), Point(1.0, tile.band_bottoms[j])});
    for (std::size_t j = 0; j < n; ++j) {
        const double y0 = tile.band_bottoms[j], y1 = tile.band_bottoms[j + 1];
        if (y1 <= y0) continue;
        tile.boundaries.push_back(Segment{Point(0.0, y0), Point(0.0, y1)});
        tile.boundaries.push_back(Segment{Point(1.0, y0), Point(1.0, y1)});
    }

    for (std::size_t j = 0; j < n; ++j) {
        const Rect band{Point(0.0, tile.band_bottoms[j]), Point(1.0, tile.band_bottoms[j + 1])};
        if (band.height() <= 0.0) continue;
        const Point xi = tile.directions[j];
        const double eps = spacings[j];
        const Point corners[4] = {band.lo, Point(band.hi.x(), band.lo.y()), band.hi, Point(band.lo.x(), band.hi.y())};
        double fmin = xi.dot(corners[0]), fmax = fmin;
        for (const auto& c : corners) {
            fmin = std::min(fmin, xi.dot(c));
            fmax = std::max(fmax, xi.dot(c));
        }
        const double c0 = xi.dot(band.lo);  // lowest x + y corner
        const double tol = 1e-9 * eps;
        const long long kmin = static_cast<long long>(std::floor((fmin - c0) / eps)) - 1;
        const long long kmax = static_cast<long long>(std::ceil((fmax - c0) / eps)) + 1;
        std::vector<double> levels;
        for (long long k = kmin; k <= kmax; ++k) {
            const double c = c0 + static_cast<double>(k) * eps;
            if (c > fmin + tol && c < fmax - tol) levels.push_back(c);
        }
        for (double c : levels)
            if (auto s = chord(band, xi, c)) tile.combs.push_back(*s);

        std::vector<double> cuts{fmin};
        cuts.insert(cuts.end(), levels.begin(), levels.end());
        cuts.push_back(fmax);
        const std::vector<Point> rect(corners, corners + 4);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            auto poly = clip_halfplane(rect, xi, cuts[k], 1.0);
            poly = clip_halfplane(poly, xi, cuts[k + 1], -1.0);
            if (poly.size() < 3) continue;
            auto cell = classify(poly, xi, cuts[k], cuts[k + 1], static_cast<int>(j));
            if (cell.polygon.size() >= 3 && cell.area() > 0.0) tile.cells.push_back(std::move(cell));
        }
    }
    return tile;
}

Comb build_comb(const Square& q, const DirectionMeasure& nu, const Eigen::Matrix2d& a, double ell, bool with_cells) {
    if (nu.empty()) throw ParameterError("direction measure has no atoms");
    if (!(ell > 0.0)) throw ParameterError("target length must be positive");
    const double t = q.side;
    Comb comb;
    comb.square = q;
    comb.target_length = ell;
    comb.eps = std::pow(t / ell, 2.0 / 3.0);
    if (comb.eps >= t) throw LengthBudgetError("length budget too small: eps >= square side");

    std::vector<double> weights, spacings;
    std::vector<Point> dirs;
    double wsum = 0.0;
    for (const auto& atom : nu) wsum += atom.weight;
    for (const auto& atom : nu) {
        const Point xi = canonical_direction(atom.direction.normalized());
        const double g = std::sqrt(std::abs(xi.dot(a * xi)));
        weights.push_back(atom.weight / wsum);
        dirs.push_back(xi);
        spacings.push_back(comb.eps * g);
        comb.anisotropic_mean += atom.weight / wsum * g;
        if (comb.eps * g >= 1.0) throw LengthBudgetError("length budget too small: band spacing >= 1");
    }
    comb.m = static_cast<int>(std::ceil(std::cbrt(ell / t) * comb.anisotropic_mean - 1e-9));
    comb.m = std::max(comb.m, 1);
    comb.tile = build_tile(weights, dirs, spacings);

    const double s = t / comb.m;
    std::vector<Segment> all;
    const auto& tile = comb.tile;
    for (int bj = 0; bj < comb.m; ++bj)
        for (int bi = 0; bi < comb.m; ++bi) {
            // (index + x) / m keeps tile edges on the exact lattice, so the outer
            // edges land on the square's sides.
            const Point idx(bi, bj);
            auto place = [&](const Point& x) { return Point(q.lo + t * ((idx + x) / comb.m)); };
            for (const auto& seg : tile.boundaries) all.push_back(Segment{place(seg.a), place(seg.b)});
            for (const auto& seg : tile.combs) all.push_back(Segment{place(seg.a), place(seg.b)});
            if (!with_cells) continue;
            for (const auto& cell : tile.cells) {
                CombCell c = cell;
                for (auto& v : c.polygon) v = place(v);
                c.height *= s;
                c.leg1 *= s;
                c.leg2 *= s;
                comb.cells.push_back(std::move(c));
            }
        }
    comb.sigma = SegmentSet(std::move(all)).canonicalized();
    comb.length_ratio = comb.sigma.total_length() / ell;
    double feature = *std::min_element(spacings.begin(), spacings.end());
    for (double h : tile.heights) feature = std::min(feature, h);
    comb.min_spacing = s * feature;
    return comb;
}

}  // namespace pscomb
