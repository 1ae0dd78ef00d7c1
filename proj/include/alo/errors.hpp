#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace alo {

enum class ErrorCode {
  EmptyName,
  InvalidName,
  DuplicateSubObject,
  DanglingSkillReference,
  InvalidALO,
  CrossReferenceBroken,
  NotFound,
  IoFailure,
  CorruptEntry,
  EmptyInput,
  UnknownName,
  ParseError,
  ValidationFailed,
  NoTableFound,
  RaggedRow,
  HttpError,
  Timeout,
  RateLimited,
  MalformedResponse,
  InvalidRequest,
  DegenerateBounds,
  OutOfBounds,
  MissingResponseSkill,
  UnsupportedDialect,
  DimensionMismatch,
  ZeroNorm,
  TrialFailed,
  BackendError,
  PreconditionFailed,
};

std::string_view to_string(ErrorCode code);

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& message) : std::runtime_error(message), code(c) {}
};

struct ParseError : Error {
  std::size_t line;
  std::string expected;
  ParseError(std::size_t line_, std::string expected_)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line_) + ": expected " + expected_),
        line(line_),
        expected(std::move(expected_)) {}
};

struct HttpError : Error {
  int status;
  HttpError(int status_, const std::string& body)
      : Error(ErrorCode::HttpError, "HTTP " + std::to_string(status_) + ": " + body),
        status(status_) {}
};

struct TrialFailed : Error {
  std::vector<std::size_t> indices;
  TrialFailed(std::vector<std::size_t> failed, const std::string& detail)
      : Error(ErrorCode::TrialFailed, detail), indices(std::move(failed)) {}
};

}  // namespace alo
