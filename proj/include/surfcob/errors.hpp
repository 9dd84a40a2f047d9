#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace surfcob {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  /// Short machine-readable tag such as "non_cycle" or "link_mismatch".
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Input violates a documented precondition or schema. `path` is a JSON
/// pointer into the offending document when the error came from parsing.
class ValidationError : public Error {
 public:
  ValidationError(std::string kind, const std::string& message, std::string path = "")
      : Error(std::move(kind), message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

  ValidationError with_prefix(const std::string& prefix) const {
    return ValidationError(kind(), what(), prefix + path_);
  }

 private:
  std::string path_;
};

/// A postcondition or cross-check that should be unreachable failed.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& message) : Error("internal", message) {}
};

}  // namespace surfcob
