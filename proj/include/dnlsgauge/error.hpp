#pragma once

#include <stdexcept>
#include <string>

namespace dnlsgauge {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Io,
  Numeric,
  Starvation,
  Limit,
};

// Every failure raised by the library carries a kind so the C API and the CLI
// can map it onto a status or an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace dnlsgauge
