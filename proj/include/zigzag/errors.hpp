#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace zigzag {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a potential or one of its partial derivatives evaluates to
// NaN/Inf.  Carries the offending position so callers can report it.
struct NonFiniteGradient : Error {
  explicit NonFiniteGradient(std::vector<double> x)
      : Error("non-finite potential or gradient"), at(std::move(x)) {}
  std::vector<double> at;
};

struct InvalidCovariance : Error {
  using Error::Error;
};

struct InvalidMixture : Error {
  using Error::Error;
};

struct EmptyDataset : Error {
  using Error::Error;
};

struct InvalidSurvivalTime : Error {
  using Error::Error;
};

struct DegenerateSelection : Error {
  using Error::Error;
};

struct DegenerateParabola : Error {
  using Error::Error;
};

struct QueryOutOfRange : Error {
  using Error::Error;
};

struct EmptyTrajectory : Error {
  using Error::Error;
};

struct GlobalBoundViolated : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace zigzag
