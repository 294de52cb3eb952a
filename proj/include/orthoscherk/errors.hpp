#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace orthoscherk {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Malformed input data (bad polygon, bad coordinates, bad config).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundaryStratumError : ValidationError {
  using ValidationError::ValidationError;
};

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
  FitError(const std::string& msg, std::vector<double> r)
      : std::runtime_error(msg), residual(std::move(r)) {}
  std::vector<double> residual;
};

struct PeriodClosureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssemblyError : std::runtime_error {
  AssemblyError(const std::string& msg, double gap)
      : std::runtime_error(msg), max_gap(gap) {}
  double max_gap;
};

// A request outside the supported configurations (e.g. asymmetric families).
struct NotSupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TopologyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace orthoscherk
