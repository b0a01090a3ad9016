#pragma once

#include <stdexcept>
#include <string>

namespace permsum {

/// Input violates a documented precondition (maps to CLI exit code 2).
struct precondition_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Request exceeds a configured resource cap (maps to CLI exit code 3).
struct cap_exceeded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace permsum
