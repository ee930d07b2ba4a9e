#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfem {

using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Index = std::size_t;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class MeshError : public Error {
 public:
  using Error::Error;
};

/// Raised when the element map folds over (det J <= 0) or is numerically singular.
class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

/// Raised when a strain-like argument reaches the limiting value of the
/// constitutive map (beta * s >= 1).
class StrainLimitError : public Error {
 public:
  StrainLimitError(const std::string& what, double scaled_strain)
      : Error(what), scaled_strain_(scaled_strain) {}
  double scaled_strain() const { return scaled_strain_; }

 private:
  double scaled_strain_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_change)
      : Error(what), last_change_(last_change) {}
  double last_change() const { return last_change_; }

 private:
  double last_change_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cfem
