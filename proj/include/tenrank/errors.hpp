#pragma once

#include <stdexcept>
#include <string>

namespace tenrank {

/// Malformed or inconsistent caller input (bad index, dimension mismatch, bad file).
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A configured size cap would be exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation requested on an object that has not been validated for it.
class StateError : public std::runtime_error {
 public:
  explicit StateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tenrank
