#pragma once

#include <stdexcept>
#include <string>

namespace massey {

// Invalid configuration: bad rank, malformed word syntax, illegal pieces,
// self-overlapping Brooks words, contradictory lambda tables.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A caller violated an operation's precondition (rank mismatch, index out of
// range, arity mismatch).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or exact computation would exceed a configured resource.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace massey
