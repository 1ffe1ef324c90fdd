#include "pscomb/segments.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace pscomb {

SegmentSet::SegmentSet(std::vector<Segment> segments) : segments_(std::move(segments)) {
    for (const auto& s : segments_)
        if (!s.a.allFinite() || !s.b.allFinite()) throw GeometryError("segment with non-finite endpoint");
}

void SegmentSet::append(const SegmentSet& other) {
    segments_.insert(segments_.end(), other.segments_.begin(), other.segments_.end());
}

double SegmentSet::total_length() const {
    double total = 0.0;
    for (const auto& s : segments_) total += s.length();
    return total;
}

Rect SegmentSet::bounding_box() const {
    if (segments_.empty()) return Rect{Point::Zero(), Point::Zero()};
    Point lo = segments_.front().a, hi = lo;
    for (const auto& s : segments_) {
        lo = lo.cwiseMin(s.a).cwiseMin(s.b);
        hi = hi.cwiseMax(s.a).cwiseMax(s.b);
    }
    return Rect{lo, hi};
}

namespace {

struct LineKey {
    double angle;   // direction angle in [0, pi)
    double offset;  // signed distance of the line from the origin
    Point dir;
    Point nrm;
    std::size_t index;
};

double direction_angle(const Point& d) {
    double a = std::atan2(d.y(), d.x());
    if (a < 0.0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    return a;
}

}  // namespace

SegmentSet SegmentSet::canonicalized(double tol) const {
    std::vector<LineKey> keys;
    keys.reserve(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (s.length() <= tol) continue;
        const Point d = canonical_direction(s.tangent());
        const Point n(-d.y(), d.x());
        keys.push_back({direction_angle(d), n.dot(s.a), d, n, i});
    }
    // Angles near pi wrap to 0; fold them so such lines group together.
    for (auto& k : keys)
        if (M_PI - k.angle < 1e-10) {
            k.angle = 0.0;
            k.dir = Point(1.0, 0.0);
            k.nrm = Point(0.0, 1.0);
            k.offset = k.nrm.dot(segments_[k.index].a);
        }
    std::sort(keys.begin(), keys.end(), [](const LineKey& a, const LineKey& b) {
        if (a.angle != b.angle) return a.angle < b.angle;
        return a.offset < b.offset;
    });

    // Group by angle first, then by offset inside an angle group.
    std::vector<Segment> out;
    std::size_t i = 0;
    while (i < keys.size()) {
        std::size_t j = i + 1;
        while (j < keys.size() && keys[j].angle - keys[j - 1].angle <= 1e-10) ++j;
        std::vector<LineKey> group(keys.begin() + i, keys.begin() + j);
        std::sort(group.begin(), group.end(), [](const LineKey& a, const LineKey& b) { return a.offset < b.offset; });
        std::size_t a = 0;
        while (a < group.size()) {
            std::size_t b = a + 1;
            while (b < group.size() && group[b].offset - group[b - 1].offset <= tol) ++b;
            const Point d = group[a].dir, n = group[a].nrm;
            const double c = group[a].offset;
            std::vector<std::pair<double, double>> spans;
            std::vector<double> breaks;
            for (std::size_t k = a; k < b; ++k) {
                const auto& s = segments_[group[k].index];
                double s0 = d.dot(s.a), s1 = d.dot(s.b);
                if (s0 > s1) std::swap(s0, s1);
                spans.emplace_back(s0, s1);
                breaks.push_back(s0);
                breaks.push_back(s1);
            }
            std::sort(spans.begin(), spans.end());
            std::sort(breaks.begin(), breaks.end());
            std::vector<double> uniq;
            for (double v : breaks)
                if (uniq.empty() || v - uniq.back() > tol) uniq.push_back(v);
            // Merge spans into a union, then cut the union at every break.
            std::vector<std::pair<double, double>> merged;
            for (const auto& sp : spans) {
                if (!merged.empty() && sp.first <= merged.back().second + tol)
                    merged.back().second = std::max(merged.back().second, sp.second);
                else
                    merged.push_back(sp);
            }
            for (const auto& m : merged) {
                double start = m.first;
                for (double v : uniq) {
                    if (v <= start + tol || v >= m.second - tol) continue;
                    out.push_back(Segment{c * n + start * d, c * n + v * d});
                    start = v;
                }
                out.push_back(Segment{c * n + start * d, c * n + m.second * d});
            }
            a = b;
        }
        i = j;
    }
    return SegmentSet(std::move(out));
}

SegmentSet SegmentSet::scaled(double t) const {
    std::vector<Segment> out;
    out.reserve(segments_.size());
    for (const auto& s : segments_) out.push_back(Segment{t * s.a, t * s.b});
    return SegmentSet(std::move(out));
}

bool SegmentSet::admissible(double L) const {
    return !segments_.empty() && connected_components(*this) == 1 && total_length() <= L * (1.0 + 1e-9);
}

namespace {

double point_segment_distance(const Point& x, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (x - s.a).norm();
    const double t = std::clamp((x - s.a).dot(d) / len2, 0.0, 1.0);
    return (x - (s.a + t * d)).norm();
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double segment_distance(const Segment& s, const Segment& t) {
    const Point r = s.b - s.a, u = t.b - t.a;
    const double denom = cross(r, u);
    if (denom != 0.0) {
        const Point w = t.a - s.a;
        const double alpha = cross(w, u) / denom;
        const double beta = cross(w, r) / denom;
        if (alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0) return 0.0;
    }
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t), point_segment_distance(t.a, s),
                     point_segment_distance(t.b, s)});
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int connected_components(const SegmentSet& sigma, double tol) {
    const int n = static_cast<int>(sigma.size());
    if (n == 0) return 0;
    const Rect box = sigma.bounding_box();
    const double diag = std::max((box.hi - box.lo).norm(), 1e-12);
    double cell = std::max(sigma.total_length() / n, diag / 2048.0);
    cell = std::max(cell, 4.0 * tol);

    // Spatial hash of inflated bounding boxes.
    std::unordered_map<long long, std::vector<int>> buckets;
    auto key = [](long long i, long long j) { return (i << 32) ^ (j & 0xffffffffLL); };
    const auto& segs = sigma.segments();
    for (int k = 0; k < n; ++k) {
        const Point lo = segs[k].a.cwiseMin(segs[k].b).array() - tol;
        const Point hi = segs[k].a.cwiseMax(segs[k].b).array() + tol;
        const long long i0 = std::floor((lo.x() - box.lo.x()) / cell), i1 = std::floor((hi.x() - box.lo.x()) / cell);
        const long long j0 = std::floor((lo.y() - box.lo.y()) / cell), j1 = std::floor((hi.y() - box.lo.y()) / cell);
        for (long long i = i0; i <= i1; ++i)
            for (long long j = j0; j <= j1; ++j) buckets[key(i, j)].push_back(k);
    }
    UnionFind uf(n);
    for (const auto& [k, members] : buckets) {
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const int s = members[a], t = members[b];
                if (uf.find(s) == uf.find(t)) continue;
                if (segment_distance(segs[s], segs[t]) <= tol) uf.unite(s, t);
            }
    }
    int count = 0;
    for (int k = 0; k < n; ++k)
        if (uf.find(k) == k) ++count;
    return count;
}

std::optional<Segment> clip_segment(const Segment& s, const Rect& r) {
    // Liang-Barsky on the closed rectangle.
    const Point d = s.b - s.a;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
    const double q[4] = {s.a.x() - r.lo.x(), r.hi.x() - s.a.x(), s.a.y() - r.lo.y(), r.hi.y() - s.a.y()};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return std::nullopt;
            continue;
        }
        const double t = q[k] / p[k];
        if (p[k] < 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 > t1) return std::nullopt;
    }
    return Segment{t0 == 0.0 ? s.a : Point(s.a + t0 * d), t1 == 1.0 ? s.b : Point(s.a + t1 * d)};
}

std::optional<Segment> clip_segment(const Segment& s, const Square& q) {
    auto c = clip_segment(s, q.rect());
    if (!c) return c;
    const Point hi = q.hi();
    // Pieces lying on an open high edge belong to the neighbouring square.
    const double tol = 1e-12 * std::max(1.0, hi.cwiseAbs().maxCoeff());
    if (!q.closed_right && std::abs(c->a.x() - hi.x()) <= tol && std::abs(c->b.x() - hi.x()) <= tol) return std::nullopt;
    if (!q.closed_top && std::abs(c->a.y() - hi.y()) <= tol && std::abs(c->b.y() - hi.y()) <= tol) return std::nullopt;
    return c;
}

SegmentSet clip_to_domain(const SegmentSet& sigma, const Domain& domain) {
    SegmentSet out;
    for (const auto& s : sigma)
        for (const auto& r : domain.rects())
            if (auto c = clip_segment(s, r); c && c->length() > 0.0) out.push_back(*c);
    return out.canonicalized();
}

double riemannian_length(const SegmentSet& sigma, const AnisotropyField& a, double rel_tol) {
    double total = 0.0;
    for (const auto& s : sigma) {
        const double len = s.length();
        if (len == 0.0) throw GeometryError("zero-length segment has no normal");
        const Point xi = s.normal();
        auto weight = [&](const Point& x) { return std::sqrt(std::abs(xi.dot(a(x) * xi))); };
        if (a.is_constant()) {
            total += weight(s.midpoint()) * len;
            continue;
        }
        int pieces = 1;
        double prev = weight(s.midpoint()) * len;
        for (;;) {
            pieces *= 2;
            double sum = 0.0;
            for (int k = 0; k < pieces; ++k) sum += weight(s.a + (k + 0.5) / pieces * (s.b - s.a));
            const double cur = sum * len / pieces;
            const bool done = std::abs(cur - prev) <= rel_tol * std::abs(cur) || pieces >= (1 << 20);
            prev = cur;
            if (done) break;
        }
        total += prev;
    }
    return total;
}

double subsquare_density(const SegmentSet& sigma, const Square& sub) {
    const double total = sigma.total_length();
    if (total <= 0.0) throw DegenerateMeasureError("empty Dirichlet region has no density");
    double inside = 0.0;
    for (const auto& s : sigma)
        if (auto c = clip_segment(s, sub)) inside += c->length();
    return inside / total;
}

double orientation_statistic(const SegmentSet& sigma, const Square& sub,
                             const std::function<double(const Point&)>& psi) {
    double len = 0.0, acc = 0.0;
    for (const auto& s : sigma) {
        auto c = clip_segment(s, sub);
        if (!c) continue;
        const double l = c->length();
        if (l == 0.0) continue;
        len += l;
        acc += l * psi(s.normal());
    }
    if (len == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return acc / len;
}

std::vector<Square> square_partition(const Rect& box, int n) {
    if (n < 1) throw ParameterError("partition needs n >= 1");
    const double side = std::max(box.width(), box.height()) / n;
    std::vector<Square> out;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Square q;
            q.lo = box.lo + Point(i * side, j * side);
            q.side = side;
            q.closed_right = (i == n - 1);
            q.closed_top = (j == n - 1);
            // The closing row and column must reach the box edge despite rounding.
            while ((i == n - 1 && q.lo.x() + q.side < box.hi.x()) || (j == n - 1 && q.lo.y() + q.side < box.hi.y()))
                q.side = std::nextafter(q.side, 2.0 * q.side);
            out.push_back(q);
        }
    return out;
}

}  // namespace pscomb
