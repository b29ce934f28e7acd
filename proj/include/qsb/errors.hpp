#pragma once

#include <stdexcept>

namespace qsb {

// Precondition or invariant violation (bad arguments, broken contracts).
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problem size exceeds what the requested code path can handle.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Run configuration could not be parsed or is inconsistent.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qsb
