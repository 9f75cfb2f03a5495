#ifndef WEILLIFT_ERRORS_HPP
#define WEILLIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace weillift {

// Base of all library errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejected input (bad discriminant, failed precondition, ...).
struct validation_error : error {
  using error::error;
};

// A numeric routine could not reach its accuracy target.
struct precision_error : error {
  using error::error;
};

// Quadrature or series acceleration failed to converge.
struct convergence_error : precision_error {
  using precision_error::precision_error;
};

}  // namespace weillift

#endif
