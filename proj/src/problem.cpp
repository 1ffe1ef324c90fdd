#include "pscomb/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <cstdint>
#include <cstdio>
#include <sstream>

namespace pscomb {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::sub: return "sub";
        case Regime::homogeneous: return "homogeneous";
        case Regime::super: return "super";
    }
    return "unknown";
}

ExponentPair ExponentPair::make(double p, double q) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ExponentError("exponent p must satisfy 1 < p < inf");
    if (!(q >= 1.0) || !std::isfinite(q)) throw ExponentError("exponent q must satisfy q >= 1");
    ExponentPair e;
    e.p = p;
    e.q = q;
    e.regime = q < p ? Regime::sub : (q == p ? Regime::homogeneous : Regime::super);
    return e;
}

void ExponentPair::require(Regime expected) const {
    if (regime != expected)
        throw RegimeError("operation requires the " + to_string(expected) + " regime, got " + to_string(regime));
}

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(std::vector<Rect> rects) : rects_(std::move(rects)) {
    if (rects_.empty()) throw GeometryError("domain needs at least one rectangle");
    for (const auto& r : rects_)
        if (!(r.width() > 0.0) || !(r.height() > 0.0)) throw GeometryError("domain rectangle with non-positive area");
    for (std::size_t i = 0; i < rects_.size(); ++i)
        for (std::size_t j = i + 1; j < rects_.size(); ++j)
            if (overlap_area(rects_[i], rects_[j]) > 1e-12 * std::min(rects_[i].area(), rects_[j].area()))
                throw GeometryError("domain rectangles overlap");

    // Interior connectivity: rectangles are adjacent when they share an edge
    // piece of positive length.
    const std::size_t n = rects_.size();
    auto touching = [](const Rect& a, const Rect& b) {
        const double tol = 1e-12 * std::max({a.width(), a.height(), b.width(), b.height()});
        const double ox = std::min(a.hi.x(), b.hi.x()) - std::max(a.lo.x(), b.lo.x());
        const double oy = std::min(a.hi.y(), b.hi.y()) - std::max(a.lo.y(), b.lo.y());
        const bool vertical_contact = std::abs(ox) <= tol && oy > tol;
        const bool horizontal_contact = std::abs(oy) <= tol && ox > tol;
        return vertical_contact || horizontal_contact;
    };
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = 1;
    while (!todo.empty()) {
        const auto i = todo.front();
        todo.pop();
        for (std::size_t j = 0; j < n; ++j)
            if (!seen[j] && touching(rects_[i], rects_[j])) {
                seen[j] = 1;
                todo.push(j);
            }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw GeometryError("domain interior is not connected");
}

double Domain::area() const {
    return std::accumulate(rects_.begin(), rects_.end(), 0.0,
                           [](double s, const Rect& r) { return s + r.area(); });
}

Rect Domain::bounding_box() const {
    Rect box = rects_.front();
    for (const auto& r : rects_) {
        box.lo = box.lo.cwiseMin(r.lo);
        box.hi = box.hi.cwiseMax(r.hi);
    }
    return box;
}

bool Domain::contains(const Point& x, double tol) const {
    return std::any_of(rects_.begin(), rects_.end(), [&](const Rect& r) { return r.contains(x, tol); });
}

bool Domain::contains_open(const Point& x) const {
    // Points on an internal shared edge are interior to the union.
    const double tol = 1e-12;
    for (const auto& r : rects_) {
        if (r.contains_open(x)) return true;
    }
    // Probe the four diagonal neighbours: interior iff all are covered.
    const Rect box = bounding_box();
    const double eps = tol * std::max(box.width(), box.height()) * 1e3;
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            const Point probe = x + eps * Point(sx, sy);
            bool covered = false;
            for (const auto& r : rects_)
                if (r.contains_open(probe)) covered = true;
            if (!covered) return false;
        }
    return true;
}

double Domain::area_in(const Rect& r) const {
    double a = 0.0;
    for (const auto& d : rects_) a += overlap_area(d, r);
    return a;
}

std::vector<Rect> Domain::clip(const Rect& r) const {
    std::vector<Rect> out;
    for (const auto& d : rects_) {
        Rect c{d.lo.cwiseMax(r.lo), d.hi.cwiseMin(r.hi)};
        if (c.width() > 0.0 && c.height() > 0.0) out.push_back(c);
    }
    return out;
}

std::vector<Segment> Domain::boundary() const {
    // Split every rectangle edge at all corner coordinates along its axis and
    // keep the pieces that have the domain on exactly one side.
    std::vector<double> xs, ys;
    for (const auto& r : rects_) {
        xs.push_back(r.lo.x());
        xs.push_back(r.hi.x());
        ys.push_back(r.lo.y());
        ys.push_back(r.hi.y());
    }
    auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(xs);
    uniq(ys);
    const Rect box = bounding_box();
    const double eps = 1e-9 * std::max(box.width(), box.height());
    auto inside = [&](const Point& x) {
        for (const auto& r : rects_)
            if (r.contains_open(x)) return true;
        return false;
    };

    std::vector<Segment> out;
    auto emit_pieces = [&](const Point& a, const Point& b, bool horizontal) {
        const double s0 = horizontal ? a.x() : a.y();
        const double s1 = horizontal ? b.x() : b.y();
        const auto& cuts = horizontal ? xs : ys;
        std::vector<double> pts{s0};
        for (double c : cuts)
            if (c > s0 && c < s1) pts.push_back(c);
        pts.push_back(s1);
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const double m = 0.5 * (pts[k] + pts[k + 1]);
            const Point mid = horizontal ? Point(m, a.y()) : Point(a.x(), m);
            const Point off = horizontal ? Point(0, eps) : Point(eps, 0);
            if (inside(mid + off) != inside(mid - off)) {
                const Point p0 = horizontal ? Point(pts[k], a.y()) : Point(a.x(), pts[k]);
                const Point p1 = horizontal ? Point(pts[k + 1], a.y()) : Point(a.x(), pts[k + 1]);
                out.push_back(Segment{p0, p1});
            }
        }
    };
    for (const auto& r : rects_) {
        emit_pieces(r.lo, Point(r.hi.x(), r.lo.y()), true);
        emit_pieces(Point(r.lo.x(), r.hi.y()), r.hi, true);
        emit_pieces(r.lo, Point(r.lo.x(), r.hi.y()), false);
        emit_pieces(Point(r.hi.x(), r.lo.y()), r.hi, false);
    }
    // Edges shared by two rectangles were visited twice; they are interior and
    // produced nothing. Outer edges were visited once each.
    return out;
}

Domain Domain::scaled(double t) const {
    std::vector<Rect> rs;
    rs.reserve(rects_.size());
    for (const auto& r : rects_) rs.push_back(Rect{t * r.lo, t * r.hi});
    return Domain(std::move(rs));
}

// ---------------------------------------------------------------------------
// Fields

namespace {

Eigen::Matrix2d from_entries(const Eigen::Vector3d& e) {
    Eigen::Matrix2d a;
    a << e(0), e(1), e(1), e(2);
    return a;
}

template <typename T>
T bilinear(const std::vector<T>& samples, const Point& origin, double spacing, int nx, int ny, const Point& x) {
    const double gx = std::clamp((x.x() - origin.x()) / spacing, 0.0, double(nx - 1));
    const double gy = std::clamp((x.y() - origin.y()) / spacing, 0.0, double(ny - 1));
    const int i = std::min(int(gx), std::max(nx - 2, 0));
    const int j = std::min(int(gy), std::max(ny - 2, 0));
    const double s = nx > 1 ? gx - i : 0.0;
    const double t = ny > 1 ? gy - j : 0.0;
    auto at = [&](int ii, int jj) -> const T& {
        return samples[std::size_t(std::min(jj, ny - 1)) * nx + std::min(ii, nx - 1)];
    };
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
           s * t * at(i + 1, j + 1);
}

double bump(const Point& x, const Point& c, double r) {
    const double s2 = (x - c).squaredNorm() / (r * r);
    return s2 < 1.0 ? (1.0 - s2) * (1.0 - s2) : 0.0;
}

// "name[v1,v2,...]" at full precision; feeds the problem hash.
std::string tagged(const char* name, std::initializer_list<double> values) {
    std::string out = std::string(name) + "[";
    char buf[32];
    bool first = true;
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += (first ? "" : ",") + std::string(buf);
        first = false;
    }
    return out + "]";
}

std::string sample_digest(const double* data, std::size_t n) {
    std::uint64_t hash = 1469598103934665603ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n * sizeof(double); ++i) {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace

AnisotropyField::AnisotropyField(Evaluator eval, bool is_constant, std::string description)
    : eval_(std::move(eval)), constant_(is_constant), description_(std::move(description)) {}

AnisotropyField AnisotropyField::constant(const Eigen::Matrix2d& a) {
    Eigen::Matrix2d sym = 0.5 * (a + a.transpose());
    return AnisotropyField([sym](const Point&) { return sym; }, true,
                           tagged("constant", {sym(0, 0), sym(0, 1), sym(1, 1)}));
}

AnisotropyField AnisotropyField::diagonal(double a11, double a22) {
    return constant(Eigen::Vector2d(a11, a22).asDiagonal());
}

AnisotropyField AnisotropyField::affine(const Eigen::Vector3d& base, const Eigen::Vector3d& d1,
                                        const Eigen::Vector3d& d2) {
    return AnisotropyField(
        [base, d1, d2](const Point& x) { return from_entries(base + x.x() * d1 + x.y() * d2); },
        d1.isZero(0.0) && d2.isZero(0.0),
        tagged("affine", {base(0), base(1), base(2), d1(0), d1(1), d1(2), d2(0), d2(1), d2(2)}));
}

AnisotropyField AnisotropyField::radial_bump(const Eigen::Vector3d& base, const Eigen::Vector3d& amplitude,
                                             const Point& center, double radius) {
    if (!(radius > 0.0)) throw ParameterError("radial bump radius must be positive");
    return AnisotropyField(
        [=](const Point& x) { return from_entries(base + bump(x, center, radius) * amplitude); },
        amplitude.isZero(0.0),
        tagged("radial_bump", {base(0), base(1), base(2), amplitude(0), amplitude(1), amplitude(2), center.x(),
                               center.y(), radius}));
}

AnisotropyField AnisotropyField::grid_samples(const Point& origin, double spacing, int nx, int ny,
                                              std::vector<Eigen::Vector3d> samples) {
    if (nx < 1 || ny < 1 || samples.size() != std::size_t(nx) * ny || !(spacing > 0.0))
        throw ParameterError("grid samples: size mismatch or bad spacing");
    auto data = std::make_shared<std::vector<Eigen::Vector3d>>(std::move(samples));
    const std::string tag = tagged("grid_samples", {origin.x(), origin.y(), spacing, double(nx), double(ny)}) +
                            sample_digest(data->front().data(), 3 * data->size());
    return AnisotropyField(
        [=](const Point& x) { return from_entries(bilinear(*data, origin, spacing, nx, ny, x)); }, false, tag);
}

ForcingField::ForcingField(Evaluator eval, bool is_constant, std::string description)
    : eval_(std::move(eval)), constant_(is_constant), description_(std::move(description)) {}

ForcingField ForcingField::constant(double value) {
    return ForcingField([value](const Point&) { return value; }, true, tagged("constant", {value}));
}

ForcingField ForcingField::affine(double value, const Point& gradient) {
    return ForcingField([value, gradient](const Point& x) { return value + gradient.dot(x); }, gradient.isZero(0.0),
                        tagged("affine", {value, gradient.x(), gradient.y()}));
}

ForcingField ForcingField::radial_bump(double base, double amplitude, const Point& center, double radius) {
    if (!(radius > 0.0)) throw ParameterError("radial bump radius must be positive");
    return ForcingField([=](const Point& x) { return base + amplitude * bump(x, center, radius); }, amplitude == 0.0,
                        tagged("radial_bump", {base, amplitude, center.x(), center.y(), radius}));
}

ForcingField ForcingField::grid_samples(const Point& origin, double spacing, int nx, int ny,
                                        std::vector<double> samples) {
    if (nx < 1 || ny < 1 || samples.size() != std::size_t(nx) * ny || !(spacing > 0.0))
        throw ParameterError("grid samples: size mismatch or bad spacing");
    auto data = std::make_shared<std::vector<double>>(std::move(samples));
    const std::string tag = tagged("grid_samples", {origin.x(), origin.y(), spacing, double(nx), double(ny)}) +
                            sample_digest(data->data(), data->size());
    return ForcingField([=](const Point& x) { return bilinear(*data, origin, spacing, nx, ny, x); }, false, tag);
}

// ---------------------------------------------------------------------------
// Sampling and checks

namespace {

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

}  // namespace

std::vector<Point> domain_samples(const Domain& domain, int sample_count) {
    if (sample_count < 1) throw ParameterError("sample_count must be >= 1");
    std::vector<Point> pts;
    pts.reserve(sample_count);
    for (const auto& r : domain.rects()) {
        for (const Point& c : {r.lo, Point(r.hi.x(), r.lo.y()), Point(r.lo.x(), r.hi.y()), r.hi}) {
            if (int(pts.size()) == sample_count) return pts;
            pts.push_back(c);
        }
    }
    const Rect box = domain.bounding_box();
    for (int k = 1; int(pts.size()) < sample_count; ++k) {
        const Point x = box.lo + Point(halton(k, 2) * box.width(), halton(k, 3) * box.height());
        if (domain.contains(x)) pts.push_back(x);
    }
    return pts;
}

EllipticityBounds check_ellipticity(const AnisotropyField& field, const Domain& domain, int sample_count) {
    EllipticityBounds b{std::numeric_limits<double>::infinity(), 0.0};
    for (const Point& x : domain_samples(domain, sample_count)) {
        const Eigen::Matrix2d a = field(x);
        if (std::abs(a(0, 1) - a(1, 0)) > 1e-12 * a.cwiseAbs().maxCoeff())
            throw DefinitenessError("anisotropy is not symmetric", x);
        SymmetricEigen2<double> e;
        try {
            e = eigen_decompose<double>(a);
        } catch (const DefinitenessError&) {
            std::ostringstream os;
            os << "anisotropy not positive definite at (" << x.x() << ", " << x.y() << ")";
            throw DefinitenessError(os.str(), x);
        }
        b.kappa0 = std::min(b.kappa0, e.a_min);
        b.kappa1 = std::max(b.kappa1, e.a_max);
    }
    return b;
}

double check_forcing(const ForcingField& field, const Domain& domain, int sample_count) {
    double fmin = std::numeric_limits<double>::infinity();
    for (const Point& x : domain_samples(domain, sample_count)) {
        const double v = field(x);
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << "forcing not positive at (" << x.x() << ", " << x.y() << ")";
            throw ParameterError(os.str());
        }
        fmin = std::min(fmin, v);
    }
    return fmin;
}

double continuity_probe(const AnisotropyField& field, const Domain& domain, int sample_count,
                        double probe_distance) {
    double worst = 0.0;
    for (const Point& x : domain_samples(domain, sample_count)) {
        for (const Point& d : {Point(probe_distance, 0), Point(0, probe_distance)}) {
            const Point y = x + d;
            if (!domain.contains(y)) continue;
            worst = std::max(worst, (field(y) - field(x)).cwiseAbs().maxCoeff() / probe_distance);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Grid

int Grid::node_at(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
    return lattice_to_node_[std::size_t(j) * nx_ + i];
}

Grid build_grid(const Domain& domain, double h) {
    if (!(h > 0.0)) throw GridAlignmentError("grid spacing must be positive");
    const Rect box = domain.bounding_box();
    auto on_lattice = [&](double coord, double anchor, double extent) {
        const double k = (coord - anchor) / h;
        return std::abs(k - std::round(k)) <= 1e-9 * std::max(1.0, extent / h);
    };
    for (const auto& r : domain.rects()) {
        if (!on_lattice(r.lo.x(), box.lo.x(), box.width()) || !on_lattice(r.hi.x(), box.lo.x(), box.width()) ||
            !on_lattice(r.lo.y(), box.lo.y(), box.height()) || !on_lattice(r.hi.y(), box.lo.y(), box.height())) {
            std::ostringstream os;
            os << "spacing " << h << " does not divide the domain rectangles";
            throw GridAlignmentError(os.str());
        }
    }

    Grid g;
    g.h_ = h;
    g.origin_ = box.lo;
    const int cx = int(std::lround(box.width() / h));
    const int cy = int(std::lround(box.height() / h));
    g.nx_ = cx + 1;
    g.ny_ = cy + 1;
    g.lattice_to_node_.assign(std::size_t(g.nx_) * g.ny_, -1);

    // Mark cells whose centre lies inside a rectangle.
    std::vector<char> cell_in(std::size_t(cx) * cy, 0);
    for (const auto& r : domain.rects()) {
        const int i0 = int(std::lround((r.lo.x() - box.lo.x()) / h));
        const int i1 = int(std::lround((r.hi.x() - box.lo.x()) / h));
        const int j0 = int(std::lround((r.lo.y() - box.lo.y()) / h));
        const int j1 = int(std::lround((r.hi.y() - box.lo.y()) / h));
        for (int j = j0; j < j1; ++j)
            for (int i = i0; i < i1; ++i) cell_in[std::size_t(j) * cx + i] = 1;
    }
    auto lattice_id = [&](int i, int j) { return std::size_t(j) * g.nx_ + i; };
    for (int j = 0; j < cy; ++j)
        for (int i = 0; i < cx; ++i) {
            if (!cell_in[std::size_t(j) * cx + i]) continue;
            for (int dj = 0; dj < 2; ++dj)
                for (int di = 0; di < 2; ++di) g.lattice_to_node_[lattice_id(i + di, j + dj)] = 0;
        }
    for (int j = 0; j < g.ny_; ++j)
        for (int i = 0; i < g.nx_; ++i) {
            auto& slot = g.lattice_to_node_[lattice_id(i, j)];
            if (slot < 0) continue;
            slot = int(g.nodes_.size());
            g.nodes_.push_back(box.lo + Point(i * h, j * h));
            g.lattice_ij_.emplace_back(i, j);
        }
    g.weight_.assign(g.nodes_.size(), 0.0);
    std::vector<int> adjacent(g.nodes_.size(), 0);
    for (int j = 0; j < cy; ++j)
        for (int i = 0; i < cx; ++i) {
            if (!cell_in[std::size_t(j) * cx + i]) continue;
            Grid::Cell c;
            c.nodes = {g.node_at(i, j), g.node_at(i + 1, j), g.node_at(i, j + 1), g.node_at(i + 1, j + 1)};
            c.center = box.lo + Point((i + 0.5) * h, (j + 0.5) * h);
            for (int n : c.nodes) {
                g.weight_[n] += 0.25 * h * h;
                ++adjacent[n];
            }
            g.cells_.push_back(c);
        }
    g.boundary_.resize(g.nodes_.size());
    for (std::size_t n = 0; n < g.nodes_.size(); ++n) g.boundary_[n] = adjacent[n] < 4;
    return g;
}

}  // namespace pscomb

namespace pscomb {

std::string ProblemSpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "p=" << exponents.p << ";q=" << exponents.q << ";h=" << h << ";domain=";
    for (const auto& r : domain.rects())
        os << "[" << r.lo.x() << "," << r.lo.y() << "," << r.hi.x() << "," << r.hi.y() << "]";
    os << ";A=" << anisotropy.description() << ";f=" << forcing.description();
    return os.str();
}

std::string problem_hash(const ProblemSpec& problem) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : problem.describe()) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace pscomb
