#pragma once

#include <stdexcept>
#include <string>

namespace gabic {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad parameters, lattice geometry or run configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Atom frequency outside the propagating band; no resonant momentum exists.
struct OutOfBandError : Error {
  using Error::Error;
};

// Function evaluated outside its mathematical domain.
struct DomainError : Error {
  using Error::Error;
};

// Parameters sit on a singular point (e.g. band edge, sin K = 0).
struct SingularParameterError : Error {
  using Error::Error;
};

// Eigenstate classification is ambiguous.
struct ClassificationError : Error {
  using Error::Error;
};

// A required bound state is absent; names the missing state.
struct ModelUnavailableError : Error {
  using Error::Error;
};

// Bad runtime input (unnormalized state, non-uniform sampling, ...).
struct InputError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct InternalError : Error {
  using Error::Error;
};

}  // namespace gabic
