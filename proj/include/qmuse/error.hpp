#pragma once

#include <stdexcept>
#include <string>

namespace qmuse {

/// Failure categories; the CLI maps these onto exit codes.
enum class ErrorKind {
  invalid_input,  // malformed model/spec/argument
  dimension,      // assignment width does not match the model
  infeasible,     // constraint can never be satisfied
  size_limit,     // problem exceeds a solver capability bound
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace qmuse
