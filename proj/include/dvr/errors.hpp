#pragma once

#include <stdexcept>
#include <string>

namespace dvr {

// Raised when an answer depends on coefficients that are not known at the
// current precision.
struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mathematically undefined request (zero divisor, tail × tail, ...).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operands built under different field configurations.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input.
struct InputError : std::runtime_error {
  InputError(const std::string& msg, int line = 0, int col = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ":" +
                                          std::to_string(col) + ": " + msg
                                    : msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

// A result that should hold by theory failed a runtime check.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dvr
