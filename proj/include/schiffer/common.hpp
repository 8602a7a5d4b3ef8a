#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace schiffer {

using cplx = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : Error {
  using Error::Error;
};

struct UnivalenceViolation : Error {
  using Error::Error;
};

struct OverlapViolation : Error {
  using Error::Error;
};

struct BasisMismatch : Error {
  using Error::Error;
};

struct AliasingError : Error {
  double ratio;
  AliasingError(const std::string& what, double r) : Error(what), ratio(r) {}
};

struct ConvergenceError : Error {
  double residual;
  ConvergenceError(const std::string& what, double r) : Error(what), residual(r) {}
};

struct CompletionFailure : Error {
  double residual;
  CompletionFailure(const std::string& what, double r) : Error(what), residual(r) {}
};

struct IllConditioned : Error {
  double condition;
  IllConditioned(const std::string& what, double c) : Error(what), condition(c) {}
};

struct QuadratureError : Error {
  using Error::Error;
};

}  // namespace schiffer
