#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cohex {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Error taxonomy shared by every module. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class InvalidDimensionError : public Error {
  using Error::Error;
};

class InvalidArgumentError : public Error {
  using Error::Error;
};

// Raised when a truncated reservoir would discard more probability than the
// configured tail tolerance allows.
class TruncationError : public Error {
  using Error::Error;
};

class RepetitionLimitError : public Error {
  using Error::Error;
};

class DivergenceError : public Error {
  using Error::Error;
};

class IoError : public Error {
  using Error::Error;
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

}  // namespace cohex
