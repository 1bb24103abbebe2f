#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace latarb {

enum class ErrorCode {
  InadmissibleParameters,
  OrderTooLarge,
  DominanceViolated,
  InvalidStats,
  ParseError,
  WrongDistributionKind,
  InvalidRatio,
  UnreachableTarget,
  InvalidConfig,
};

const char* to_string(ErrorCode code) noexcept;

/// Base error for every model-level failure. Carries a machine-readable code
/// so callers (the CLI in particular) can map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Input text could not be parsed. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(ErrorCode::ParseError, format(source, line, what)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& what) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    return out + ": " + what;
  }

  std::size_t line_;
};

}  // namespace latarb
