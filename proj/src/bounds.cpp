#include "pscomb/bounds.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pscomb/limits.hpp"

namespace pscomb {

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lower: return "lower";
        case BoundKind::trapezoid_upper: return "trapezoid-upper";
        case BoundKind::rectangle_exact: return "rectangle-exact";
        case BoundKind::combined: return "combined";
        case BoundKind::asymptotic_upper: return "asymptotic-upper";
    }
    return "lower";
}

BoundReport lower_bound(double len_a, int components, double area, double det_a, double p, double q) {
    if (!(len_a >= 0.0) || components < 1 || !(area > 0.0) || !(det_a > 0.0))
        throw ParameterError("lower_bound needs lenA >= 0, N >= 1, area > 0, det A > 0");
    const double root = std::sqrt(det_a);
    const double n_pi = components * M_PI * root;
    const double delta = area / (len_a + std::sqrt(len_a * len_a + n_pi * area));
    BoundReport r;
    r.kind = BoundKind::lower;
    r.inputs = {{"lenA", len_a}, {"N", double(components)}, {"area", area}, {"detA", det_a}, {"delta", delta}};
    if (len_a == 0.0) {
        r.vacuous = true;
        r.value = 0.0;
        return r;
    }
    r.value = c_pq_closed(p, q) * std::pow(2.0 * delta, p + p / q - 1.0) * std::pow(len_a, p / q) /
              (len_a + n_pi * delta);
    return r;
}

BoundReport trapezoid_upper(double area, double h, double k1, double k2, const Point& xi, const Eigen::Matrix2d& a,
                            double p, double q, TrapezoidForm form) {
    if (!(h > 0.0)) throw ParameterError("trapezoid height must be positive");
    const auto e = eigen_decompose<double>(a);
    const Point x = xi.normalized();
    const double axx = std::sqrt(std::abs(x.dot(a * x)));
    const double factor = form == TrapezoidForm::proof ? 1.0 / std::sqrt(e.a_min) : std::sqrt(e.a_max);
    const double eff = area + factor * (k1 + k2) * h / (2.0 * axx);
    BoundReport r;
    r.kind = BoundKind::trapezoid_upper;
    r.value = c_pq_closed(p, q) * std::pow(eff, p / q - 1.0) * std::pow(h / axx, p);
    r.inputs = {{"area", area}, {"h", h}, {"k1", k1}, {"k2", k2}, {"form", form == TrapezoidForm::proof ? 0.0 : 1.0}};
    return r;
}

double rectangle_exact(double area, double h, double p, double q) {
    return c_pq_closed(p, q) * std::pow(area, p / q - 1.0) * std::pow(h, p);
}

BoundReport enclosure_upper(const std::vector<Point>& polygon, const Point& xi, const Eigen::Matrix2d& a, double p,
                            double q) {
    if (polygon.size() < 3) throw ParameterError("polygon needs at least three vertices");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(0.5 * (a + a.transpose()));
    const Eigen::Matrix2d b = es.operatorInverseSqrt();
    const Eigen::Matrix2d half = es.operatorSqrt();
    const Point n = (half * xi.normalized()).normalized();
    const Point t(-n.y(), n.x());
    double nmin = std::numeric_limits<double>::infinity(), nmax = -nmin, tmin = nmin, tmax = -nmin;
    for (const auto& v : polygon) {
        const Point y = b * v;
        nmin = std::min(nmin, n.dot(y));
        nmax = std::max(nmax, n.dot(y));
        tmin = std::min(tmin, t.dot(y));
        tmax = std::max(tmax, t.dot(y));
    }
    const double h_r = nmax - nmin, w_r = tmax - tmin;
    BoundReport r;
    r.kind = BoundKind::rectangle_exact;
    const double det_half = std::sqrt(a.determinant());
    r.value = c_pq_closed(p, q) * std::pow(det_half, p / q - 1.0) * std::pow(h_r * w_r, p / q - 1.0) * std::pow(h_r, p);
    r.inputs = {{"h_R", h_r}, {"w_R", w_r}};
    return r;
}

double combine_disconnected(const std::vector<double>& values, double p, double q) {
    if (!(q < p)) throw RegimeError("combine_disconnected needs q < p; use combine_homogeneous");
    if (values.empty()) throw ParameterError("nothing to combine");
    const double e = q / (p - q);
    double s = 0.0;
    for (double v : values) {
        if (!(v > 0.0)) throw ParameterError("constants must be positive");
        s += std::pow(v, e);
    }
    return std::pow(s, 1.0 / e);
}

double combine_homogeneous(const std::vector<double>& values) {
    if (values.empty()) throw ParameterError("nothing to combine");
    return *std::max_element(values.begin(), values.end());
}

double asymptotic_upper_comb(double area_q, const DirectionMeasure& nu, const Eigen::Matrix2d& a, double p, double q) {
    double mass = 0.0, mean = 0.0;
    for (const auto& atom : nu) {
        const Point y = atom.direction.normalized();
        mass += atom.weight;
        mean += atom.weight * std::sqrt(std::abs(y.dot(a * y)));
    }
    if (!(mass > 0.0)) throw DegenerateMeasureError("direction measure has no mass");
    mean /= mass;
    return c_pq_closed(p, q) * std::pow(area_q, p + p / q - 1.0) / std::pow(mean, p);
}

BoundReport comb_upper(const std::vector<CombCell>& cells, const Eigen::Matrix2d& a, double p, double q) {
    if (cells.empty()) throw ParameterError("comb has no cells");
    std::vector<double> values;
    values.reserve(cells.size());
    int trapezoids = 0;
    for (const auto& c : cells) {
        double v;
        if (c.trapezoid) {
            ++trapezoids;
            v = std::max(trapezoid_upper(c.area(), c.height, c.leg1, c.leg2, c.direction, a, p, q, TrapezoidForm::proof).value,
                         trapezoid_upper(c.area(), c.height, c.leg1, c.leg2, c.direction, a, p, q, TrapezoidForm::statement).value);
        } else {
            v = enclosure_upper(c.polygon, c.direction, a, p, q).value;
        }
        values.push_back(v);
    }
    BoundReport r;
    r.kind = BoundKind::combined;
    r.value = q < p ? combine_disconnected(values, p, q) : combine_homogeneous(values);
    r.inputs = {{"cells", double(cells.size())}, {"trapezoids", double(trapezoids)}};
    return r;
}

double fit_scaling_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) throw ParameterError("need at least two samples to fit an exponent");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = samples.size();
    for (const auto& [l, c] : samples) {
        if (!(l > 0.0) || !(c > 0.0)) throw ParameterError("samples must be positive");
        const double x = std::log(l), y = std::log(c);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ParameterError("samples need distinct L values");
    return -(n * sxy - sx * sy) / denom;
}

}  // namespace pscomb
