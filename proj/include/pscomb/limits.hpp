#pragma once

#include <functional>

#include <Eigen/Core>

#include "pscomb/problem.hpp"
#include "pscomb/varifold.hpp"

namespace pscomb {

/// int_0^1 (1 - s^q)^{-1/p} ds via s = 1 - tau^{p/(p-1)} and adaptive Gauss-Legendre.
double singular_integral(double p, double q);

/// Same integral by tanh-sinh directly in s. Independent check of the above.
double quadrature_cross_check(double p, double q);

/// Best constant of the unit interval with Dirichlet conditions at both ends.
double c_pq_closed(double p, double q);

struct OneDimEigen {
    double p = 2.0, q = 2.0;
    double value = 0.0;
    Eigen::VectorXd profile;  // n+1 nodal values on [0, 1], max 1
    int iterations = 0;
};

/// Maximizes the discrete interval quotient by ascent preconditioned with the
/// 1-D Laplacian, starting from the tent function.
OneDimEigen interval_eigen_1d(double p, double q, int n);

struct LimitPrediction {
    double r = 0.0;            // p / (pq + p - q)
    double normalizer = 0.0;   // int_Omega f^r / a_max^{rq/2}
    double constant = 0.0;     // c_{p,q} normalizer^{p + p/q - 1}
    std::function<double(const Point&)> density;   // rho_inf
    std::function<Point(const Point&)> orientation; // xi(x)
};

/// Optimal density and orientation. Accepts sub-homogeneous and homogeneous
/// exponents (in the homogeneous case the formulas give the minimizer of the
/// sup form). Normalizer by composite midpoint rule, halving from the problem
/// grid spacing until the relative change is below 1e-8.
LimitPrediction optimal_density(const ProblemSpec& problem);
double limit_constant(const ProblemSpec& problem);

/// Midpoint-rule integral of g over the domain, refined as in optimal_density.
double integrate_domain(const Domain& domain, const std::function<double(const Point&)>& g, double h0,
                        double rel_tol = 1e-8);

/// Piecewise-constant realization of the prediction on the lattice of side t:
/// nu_i = delta at xi(center), rho_i the exact minimizer of F_infinity given
/// these nu_i on the same k x k sample grid.
FittedVarifold fit_prediction(const ProblemSpec& problem, double t, int samples_per_side = 1);

/// Sub-homogeneous limit functional of a fitted varifold. The integral over
/// each piece of the domain uses k x k midpoint samples. +infinity when a
/// covered square has rho = 0.
double F_infinity(const FittedVarifold& theta, const ProblemSpec& problem, int samples_per_side = 1);

/// Homogeneous sup form: c_{p,p} max f / (rho_i int |A y.y|^{1/2} d nu_i)^p
/// over k x k samples per piece.
double F_infinity_homogeneous(const FittedVarifold& theta, const ProblemSpec& problem, int samples_per_side = 4);

}  // namespace pscomb
