#pragma once

#include <stdexcept>
#include <string>

namespace pfoco {

// Contract breach or numerical failure inside the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user-facing configuration (parameters, config files, incompatible
// oracle/problem pairs). The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace pfoco
