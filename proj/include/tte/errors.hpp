#pragma once

#include <stdexcept>
#include <string>

namespace tte {

// Malformed user input: bad permutation text, size mismatch, bad matrix file.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured search or contraction cap would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal identity that must hold did not.
class VerificationFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace tte
