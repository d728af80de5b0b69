#pragma once

#include <stdexcept>
#include <string>

namespace mamkkc {

// Bad user input: unreadable or malformed files, out-of-range parameters,
// degenerate data. Maps to exit code 1 in the CLI.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: singular solves, eigensolver breakdown, violated
// solver invariants. Maps to exit code 2 in the CLI.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mamkkc
