#pragma once

#include <stdexcept>
#include <string>

namespace cmi {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type to a process exit code (see exit_code()).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t row)
      : Error("row " + std::to_string(row) + ": " + msg), row_(row) {}
  explicit ParseError(const std::string& msg) : Error(msg) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_ = 0;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class NoDonorsError : public InsufficientDataError {
 public:
  using InsufficientDataError::InsufficientDataError;
};

class CannotClassifyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ScoringError : public Error {
 public:
  using Error::Error;
};

enum class ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,
  kInsufficientData = 3,
  kUnlabeled = 4,
  kCaseStudyMismatch = 5,
};

inline ExitCode exit_code(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const DecodeError*>(&e) || dynamic_cast<const ConfigError*>(&e)) {
    return ExitCode::kParse;
  }
  if (dynamic_cast<const InsufficientDataError*>(&e) || dynamic_cast<const DomainError*>(&e)) {
    return ExitCode::kInsufficientData;
  }
  if (dynamic_cast<const CannotClassifyError*>(&e)) return ExitCode::kUnlabeled;
  return ExitCode::kInternal;
}

}  // namespace cmi
