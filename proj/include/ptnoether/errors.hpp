#pragma once

#include <stdexcept>
#include <string>

namespace ptnoether {

enum class ErrorKind {
  InvalidArgument,
  Regime,   // operation unavailable at or near an exceptional point
  Numeric,  // non-convergence, singular input
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ptnoether
