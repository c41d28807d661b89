#pragma once

#include <stdexcept>
#include <string>

namespace mscale {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad input or configuration, detected before any computation starts.
/// The CLI maps this family to exit code 2.
class ValidationError : public Error {
public:
  using Error::Error;
};

class InvalidConfig : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class MalformedFile : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class GapDetected : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class EmptyPanel : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class SeriesTooShort : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class WindowTooSmall : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class PeriodOutOfRange : public ValidationError {
public:
  using ValidationError::ValidationError;
};

class OutOfRange : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// Runtime failures: the inputs were well-formed but the computation could
// not produce a meaningful value.

class DegenerateSeries : public Error {
public:
  using Error::Error;
};

class AllSeriesDegenerate : public Error {
public:
  using Error::Error;
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class EmbeddingFailure : public Error {
public:
  using Error::Error;
};

}  // namespace mscale
