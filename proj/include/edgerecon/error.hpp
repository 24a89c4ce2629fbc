#pragma once

#include <stdexcept>
#include <string>

namespace edgerecon {

enum class ErrorKind {
  InvalidArgument,  // bad config, shape mismatch, precondition violated
  Numerical,        // non-finite values, divergence
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_invalid(const std::string& what) {
  throw Error(ErrorKind::InvalidArgument, what);
}

[[noreturn]] inline void fail_numerical(const std::string& what) {
  throw Error(ErrorKind::Numerical, what);
}

[[noreturn]] inline void fail_io(const std::string& what) {
  throw Error(ErrorKind::Io, what);
}

}  // namespace edgerecon
