#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace poisson {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSiteSet : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class SiteOutOfRange : public Error {
 public:
  using Error::Error;
};

// drop_point on a site with zero multiplicity.
class PointAbsent : public Error {
 public:
  using Error::Error;
};

class InvalidSpace : public Error {
 public:
  using Error::Error;
};

// A functional produced a NaN or infinity.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t required_states)
      : Error(what), required_states_(required_states) {}
  std::size_t required_states() const noexcept { return required_states_; }

 private:
  std::size_t required_states_;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace poisson
