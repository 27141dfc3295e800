#pragma once

#include <stdexcept>
#include <string>

namespace factorisatio {

// Error taxonomy, kept deliberately small.  The CLI maps these onto process
// exit codes, so library code must pick the right family:
//
//   DomainError     -- caller violated a precondition (bad n, bad range, ...)
//   ResourceError   -- the request is well-formed but exceeds a configured
//                      budget (sieve memory, enumeration size, node budget)
//   CheckpointError -- a checkpoint file is missing, corrupt, or inconsistent

struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct CheckpointError : std::runtime_error {
  explicit CheckpointError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace factorisatio
