#pragma once

#include <stdexcept>
#include <string>

namespace freeconv {

/// Numeric values double as CLI exit codes and C API status codes.
enum class ErrorCode : int {
  kParse = 2,
  kDomain = 3,
  kNonConvergence = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::kParse, what) {}
};

/// Precondition or domain violation (bad order, measure not on the half line, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCode::kDomain, what) {}
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorCode::kNonConvergence, what) {}
};

}  // namespace freeconv
