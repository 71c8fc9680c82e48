#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stn {

// Mirrors stn_status in the C API; keep the numeric values in sync.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kDimension = 2,
  kParse = 3,
  kUnsupported = 4,
  kContradiction = 5,
  kImpossibleOutcome = 6,
  kStale = 7,
  kSizeLimit = 8,
  kIo = 9,
  kInternal = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::kDimension, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace stn
