#pragma once

#include <stdexcept>
#include <string>

namespace thermo {

// Precondition of an operation was not met by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Camera or network parameters are physically inadmissible.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Weights do not match the network configuration they are loaded into.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed file contents (frame, weight, camera-parameter or CSV files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ContractViolation(what);
}

}  // namespace thermo
