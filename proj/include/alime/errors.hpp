#pragma once

#include <stdexcept>
#include <string>

namespace alime {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unusable parameters or input files: unknown schema, out-of-range sizes,
// missing paths. The CLI maps these to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Dataset file content that cannot be parsed; messages name the 1-based line.
struct MalformedInputError : ConfigError {
  using ConfigError::ConfigError;
};

// A column with no present cells; imputation has nothing to work with.
struct DegenerateColumnError : ConfigError {
  using ConfigError::ConfigError;
};

// Too few rows to split.
struct InsufficientDataError : ConfigError {
  using ConfigError::ConfigError;
};

// Vector/matrix dimensions that do not line up.
struct ShapeError : Error {
  using Error::Error;
};

// Non-finite values produced by a forward pass.
struct NumericOverflowError : Error {
  using Error::Error;
};

struct TrainingDivergedError : Error {
  using Error::Error;
};

// Normal equations not solvable (only possible with alpha = 0).
struct SingularFitError : Error {
  using Error::Error;
};

}  // namespace alime
