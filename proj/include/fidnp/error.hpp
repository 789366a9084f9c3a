#pragma once

#include <stdexcept>
#include <string>

namespace fidnp {

enum class ErrorKind {
  Domain,      // argument outside the mathematical domain (t <= 0, alpha not in (0,1))
  Constraint,  // knot constraints violated
  Parameter,   // invalid distribution parameters
  Config,      // inconsistent configuration (labels, dimensions, sizes)
  Inference,   // not enough usable replicates to form an estimate
  Usage,       // operation not applicable to the given input
  Parse,       // malformed input file
  Io,          // file system failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace fidnp
