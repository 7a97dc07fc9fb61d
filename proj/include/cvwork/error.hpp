#pragma once

#include <stdexcept>
#include <string>

namespace cvwork {

enum class ErrorKind {
  validation,  // covariance matrix violates symmetry / positivity
  unphysical,  // symplectic eigenvalue below the vacuum bound
  domain,      // parameter outside its allowed range
  dimension,   // wrong number of modes or vector length
  numeric,     // factorization or solver failure
  usage,       // malformed configuration
  io,
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

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace cvwork
