#pragma once

#include <stdexcept>
#include <string>

namespace cmr {

// Failure classes. The CLI maps each class onto a distinct exit code.
enum class ErrorKind {
  kArgument,
  kFormat,
  kConsistency,
  kValidation,
  kIo,
  kNumeric,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorKind::kArgument, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorKind::kFormat, what) {}
};

class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what)
      : Error(ErrorKind::kConsistency, what) {}
};

// Raised for invalid data content. row() is the offending row, or -1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, long long row = -1)
      : Error(ErrorKind::kValidation, what), row_(row) {}

  long long row() const noexcept { return row_; }

 private:
  long long row_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorKind::kNumeric, what) {}
};

}  // namespace cmr
