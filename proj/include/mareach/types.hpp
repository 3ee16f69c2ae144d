#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mareach {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct InvalidDimension : Error {
    using Error::Error;
};
struct StructureMismatch : Error {
    using Error::Error;
};
struct NegativeMultiplier : Error {
    using Error::Error;
};
struct NotAffine : Error {
    using Error::Error;
};
struct NonFiniteEntries : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
struct SolverFailure : Error {
    using Error::Error;
};
struct InfeasibleProblem : Error {
    using Error::Error;
};

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace mareach
