#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace cosparse {

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = Vec<double>;
using Matrix = Mat<double>;
using CVector = Vec<std::complex<double>>;
using CMatrix = Mat<std::complex<double>>;

/// Scalar field of an operator's measurement side.
enum class Field { Real, Complex };

/// Dimension mismatch between an operator and its argument.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Base for failures of the numerical kind (CLI exit code 2).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input matrix does not have the rank the operation requires.
struct RankError : NumericalError {
  using NumericalError::NumericalError;
};

/// An iterative solver produced non-finite values.
struct DivergenceError : NumericalError {
  DivergenceError(const std::string& what, int iteration_)
      : NumericalError(what), iteration(iteration_) {}
  int iteration;
};

/// File-system or format failure (CLI exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cosparse
