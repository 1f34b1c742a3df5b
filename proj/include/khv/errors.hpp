#pragma once

#include <stdexcept>
#include <string>

namespace khv {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind { Parse = 2, Validation = 3, Budget = 4, Internal = 5 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorKind::Parse, m) {}
};
struct ValidationError : Error {
  explicit ValidationError(const std::string& m)
      : Error(ErrorKind::Validation, m) {}
};
struct BudgetError : Error {
  explicit BudgetError(const std::string& m) : Error(ErrorKind::Budget, m) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& m)
      : Error(ErrorKind::Internal, m) {}
};

}  // namespace khv
