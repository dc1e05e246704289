#pragma once

#include <stdexcept>
#include <string>

namespace coarsetop {

// Malformed or inconsistent input. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource cap would be exceeded. The CLI maps this to exit code 3.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal self-check failed; indicates a bug, never bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace coarsetop
