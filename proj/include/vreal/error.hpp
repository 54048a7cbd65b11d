#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vreal {

enum class Errc {
  // scenario engine
  OutOfOrderEvent,
  WrongSceneEvent,
  UnexpectedEvent,
  NotAGatedScene,
  // scoring
  UnknownItem,
  DuplicateSpot,
  IncompleteSession,
  MalformedLog,
  // session log
  MonotonicityViolation,
  SchemaVersionMismatch,
  ParseError,
  // vrnq
  ItemOutOfRange,
  WrongItemCount,
  EmptyCohort,
  InvalidDomainMap,
  // statistics
  DegenerateSample,
  IntegrationFailure,
  InvalidArgument,
  // simulation / config
  LengthMismatch,
  ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure the library reports carries one of the codes above; the
/// message is human-readable and already names the offending value.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// ParseError with a 1-based line and a byte offset within that line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t offset, const std::string& what)
      : Error(Errc::ParseError,
              "line " + std::to_string(line) + ", offset " + std::to_string(offset) + ": " + what),
        line_(line),
        offset_(offset) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t line_;
  std::size_t offset_;
};

}  // namespace vreal
