#pragma once

#include <stdexcept>
#include <string>

namespace shockfan {

// Base class for everything this library throws on purpose. Callers that just
// want "the toolkit failed" can catch this; tests catch the specific types.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configuration and precondition problems (bad parameters, malformed scenario
// files). The CLI maps these to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct InvalidParams : ConfigError {
  using ConfigError::ConfigError;
};

// --- eigenstructure / model domain ---

struct NonHyperbolic : Error {
  using Error::Error;
};
struct OutOfDomain : Error {
  using Error::Error;
};
struct NonPositiveMargin : Error {
  using Error::Error;
};
struct NotGenuinelyNonlinear : Error {
  using Error::Error;
};

// --- scalar solves ---

struct NoConvergence : Error {
  using Error::Error;
};
struct SingularJacobian : Error {
  using Error::Error;
};
struct NoBracket : Error {
  using Error::Error;
};
struct RootBracketFailure : Error {
  using Error::Error;
};

// --- grid solver ---

struct CFLViolation : Error {
  using Error::Error;
};
struct OutOfBall : Error {
  using Error::Error;
};

// --- characteristic tracing ---

struct InterpolationOutOfRange : Error {
  using Error::Error;
};
struct StepSizeUnderflow : Error {
  using Error::Error;
};
struct DegenerateFan : Error {
  using Error::Error;
};

// --- seed statistics and forecasting ---

struct ZeroSeed : Error {
  using Error::Error;
};
struct ZeroPositivePart : Error {
  using Error::Error;
};
struct NoShockDetected : Error {
  using Error::Error;
};

// --- exact solution (invariant-based oracle) ---

struct NegativeRadicand : Error {
  using Error::Error;
};
struct NonPositiveConstant : Error {
  using Error::Error;
};
struct PostShockQuery : Error {
  using Error::Error;
};
struct NoShock : Error {
  using Error::Error;
};
struct CoupledParamsRejected : ConfigError {
  using ConfigError::ConfigError;
};

} // namespace shockfan
