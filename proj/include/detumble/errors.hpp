#pragma once

// Error taxonomy for the detumble library. Everything derives from Error so
// callers can catch the whole family with one handler.

#include <stdexcept>
#include <string>

namespace detumble {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Quaternion norm too small to normalize, or a unit-norm precondition failed.
class DegenerateQuaternion : public Error {
  public:
    using Error::Error;
};

// A principal moment of inertia is zero or negative.
class SingularInertia : public Error {
  public:
    using Error::Error;
};

// Position vector too close to the gravitating body's center.
class OriginSingularity : public Error {
  public:
    using Error::Error;
};

// NaN or Inf appeared in the integrated state.
class NonFiniteState : public Error {
  public:
    using Error::Error;
};

// Spacecraft preset name not in the catalog.
class UnknownPreset : public Error {
  public:
    using Error::Error;
};

// Malformed scenario or telemetry text; carries the 1-based line number.
class ParseError : public Error {
  public:
    ParseError(int line_number, const std::string& message)
        : Error("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}

    int line;
};

// Structurally valid input whose values violate an invariant (dt <= 0, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

// Stream or file read/write failure.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace detumble
