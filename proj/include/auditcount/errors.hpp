#pragma once

#include <stdexcept>
#include <string>

namespace auditcount {

/// Input text could not be parsed; carries a 1-based source location.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int col)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

/// An exhaustive sweep would exceed the configured enumeration budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The oracle could not complete a query under the configured policy
/// (randomized search came up empty where an exact answer was required,
/// or a counter exhausted its retries).
class OracleIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External solver process failed: missing binary, timeout, or garbage output.
class ExternalSolverError : public std::runtime_error {
 public:
  enum class Kind { missing, timeout, unparseable, spawn };
  ExternalSolverError(Kind kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Certificate file violates the schema or does not match the formula.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace auditcount
