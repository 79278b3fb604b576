#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmcf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or invalid argument combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A mathematical operation was applied outside its domain.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double offending)
      : Error(what + " (value " + std::to_string(offending) + ")"), value_(offending) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Degenerate initial geometry (zero tangent, zero normal).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Parametrization degenerated at a collocation point: |γ_u| or det g too small.
class SingularParametrization : public Error {
 public:
  using Error::Error;
};

/// Non-finite activation while propagating through the network.
class NumericOverflow : public Error {
 public:
  NumericOverflow(const std::string& what, std::size_t layer) : Error(what), layer_(layer) {}
  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

/// Loss or gradient became non-finite during optimization.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t component)
      : Error(what), component_(component) {}
  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Requested analysis has no reference for this geometry.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace hmcf
