#include "pscomb/varifold.hpp"

#include <cmath>
#include <map>

namespace pscomb {

double direction_angle_of(const Point& d) {
    double a = std::atan2(d.y(), d.x());
    if (a < 0.0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    return a;
}

Varifold::Varifold(std::vector<VarifoldAtom> atoms) : atoms_(std::move(atoms)) {
    long double total = 0.0L;
    for (const auto& a : atoms_) {
        if (!(a.weight >= 0.0)) throw DegenerateMeasureError("varifold weights must be nonnegative");
        total += a.weight;
    }
    if (std::abs(static_cast<double>(total) - 1.0) > 1e-12) throw DegenerateMeasureError("varifold weights must sum to 1");
}

Varifold varifold_of(const SegmentSet& sigma) {
    long double sum = 0.0L;
    for (const auto& s : sigma) sum += s.length();
    const double total = static_cast<double>(sum);
    if (!(total > 0.0)) throw DegenerateMeasureError("Dirichlet region has zero length");
    std::vector<VarifoldAtom> atoms;
    long double acc = 0.0L;
    for (const auto& s : sigma) {
        const double len = s.length();
        if (len == 0.0) continue;
        atoms.push_back({s.midpoint(), direction_angle_of(s.normal()), len / total});
        acc += len / total;
    }
    // Absorb rounding so the mass is 1 to machine precision.
    const double fix = static_cast<double>(1.0L / acc);
    for (auto& a : atoms) a.weight *= fix;
    return Varifold(std::move(atoms));
}

double test_integral(const Varifold& theta, const EvenTest& phi) {
    double sum = 0.0;
    std::size_t probe = 0;
    const std::size_t stride = std::max<std::size_t>(1, theta.atoms().size() / 16);
    for (const auto& a : theta.atoms()) {
        const Point y = direction_from_angle(a.angle);
        const double v = phi(a.position, y);
        if (probe++ % stride == 0) {
            const double w = phi(a.position, -y);
            if (std::abs(v - w) > 1e-12 * std::max(1.0, std::abs(v)))
                throw SymmetryContractError("test function is not even in the direction argument");
        }
        sum += a.weight * v;
    }
    return sum;
}

double DirectionLaw::integrate(const std::function<double(const Point&)>& psi) const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * psi(a.direction);
    return s;
}

double DirectionLaw::anisotropic_mean(const Eigen::Matrix2d& a) const {
    return integrate([&](const Point& y) { return std::sqrt(std::abs(y.dot(a * y))); });
}

double DirectionLaw::total_mass() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight;
    return s;
}

double FittedVarifold::normalization() const {
    double s = 0.0;
    for (const auto& q : squares) s += q.rho * q.domain_area;
    return s;
}

std::vector<FittedSquare> lattice_squares(const Domain& domain, double t) {
    if (!(t > 0.0)) throw ParameterError("lattice side must be positive");
    const Rect box = domain.bounding_box();
    const long long i0 = std::floor(box.lo.x() / t + 1e-9), i1 = std::ceil(box.hi.x() / t - 1e-9);
    const long long j0 = std::floor(box.lo.y() / t + 1e-9), j1 = std::ceil(box.hi.y() / t - 1e-9);
    std::map<std::pair<long long, long long>, std::size_t> index;
    std::vector<FittedSquare> out;
    for (long long j = j0; j < j1; ++j)
        for (long long i = i0; i < i1; ++i) {
            FittedSquare fs;
            fs.ix = static_cast<int>(i);
            fs.iy = static_cast<int>(j);
            fs.square.lo = Point(i * t, j * t);
            fs.square.side = t;
            fs.pieces = domain.clip(fs.square.rect());
            for (const auto& r : fs.pieces) fs.domain_area += r.area();
            if (fs.domain_area <= 1e-14 * t * t) continue;
            index[{i, j}] = out.size();
            out.push_back(std::move(fs));
        }
    for (auto& fs : out) {
        fs.square.closed_right = !index.count({fs.ix + 1LL, fs.iy});
        fs.square.closed_top = !index.count({fs.ix, fs.iy + 1LL});
    }
    return out;
}

FittedVarifold fit_varifold(const Varifold& theta, const Domain& domain, double t) {
    FittedVarifold fit;
    fit.t = t;
    fit.squares = lattice_squares(domain, t);
    std::map<std::pair<long long, long long>, std::size_t> index;
    for (std::size_t k = 0; k < fit.squares.size(); ++k) index[{fit.squares[k].ix, fit.squares[k].iy}] = k;

    std::vector<double> mass(fit.squares.size(), 0.0);
    std::vector<std::map<double, double>> laws(fit.squares.size());
    for (const auto& a : theta.atoms()) {
        if (a.weight == 0.0) continue;
        const long long i = std::floor(a.position.x() / t), j = std::floor(a.position.y() / t);
        std::size_t target = fit.squares.size();
        for (auto [di, dj] : {std::pair{0, 0}, {-1, 0}, {0, -1}, {-1, -1}}) {
            auto it = index.find({i + di, j + dj});
            if (it != index.end()) {
                target = it->second;
                break;
            }
        }
        if (target == fit.squares.size()) continue;  // atom outside the closed domain
        mass[target] += a.weight;
        laws[target][a.angle] += a.weight;
    }
    for (std::size_t k = 0; k < fit.squares.size(); ++k) {
        auto& fs = fit.squares[k];
        fs.rho = mass[k] / fs.domain_area;
        if (mass[k] == 0.0) continue;
        for (const auto& [angle, w] : laws[k]) fs.nu.atoms.push_back({direction_from_angle(angle), w / mass[k]});
    }
    return fit;
}

}  // namespace pscomb
