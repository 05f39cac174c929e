#pragma once

#include <stdexcept>
#include <string>

namespace idmps {

// Base of every error thrown by the core. The C API maps each subclass onto
// one status code, so keep this hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller handed us something that violates a precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// Mathematical domain violation (Im tau <= 0, pole of a kernel, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Series did not converge, eigensolver stalled, NaN from an objective.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Internal post-condition failed (all-zero state, resolved pairing missing).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace idmps
