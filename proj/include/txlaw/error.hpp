#pragma once

#include <stdexcept>
#include <string>

namespace txlaw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (empty spectrum, negative entries, ...).
struct InputError : Error {
  using Error::Error;
};

// Parameter outside the domain where the equations are validated,
// e.g. |z| inside the excluded band or no admissible root.
struct DomainError : Error {
  using Error::Error;
};

// Iteration failed to converge, pole proximity, bracketing failure.
struct NumericalError : Error {
  using Error::Error;
};

}  // namespace txlaw
