#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace pscomb {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix that should be symmetric positive definite is not.
class DefinitenessError : public Error {
public:
    DefinitenessError(const std::string& what, Eigen::Vector2d where = Eigen::Vector2d::Constant(std::nan("")))
        : Error(what), where_(std::move(where)) {}
    const Eigen::Vector2d& where() const { return where_; }

private:
    Eigen::Vector2d where_;
};

class GridAlignmentError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class ExponentError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class RegimeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class LengthBudgetError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class GeometryError : public Error {
public:
    using Error::Error;
};

class DegenerateMeasureError : public Error {
public:
    using Error::Error;
};

class SymmetryContractError : public Error {
public:
    using Error::Error;
};

class TrivialSpaceError : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of iterations. Carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Eigen::VectorXd last_iterate)
        : Error(what), last_(std::move(last_iterate)) {}
    const Eigen::VectorXd& last_iterate() const { return last_; }

private:
    Eigen::VectorXd last_;
};

}  // namespace pscomb
