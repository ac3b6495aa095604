#pragma once

#include <stdexcept>
#include <string>

namespace adaptseg {

/// Broad failure category. Maps one-to-one onto the C API status codes and
/// onto the CLI exit codes.
enum class ErrorKind {
  InvalidArgument,
  Config,
  Numeric,
  Io,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace adaptseg
