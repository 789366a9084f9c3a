#include "fidnp/error.hpp"

namespace fidnp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Constraint: return "constraint error";
    case ErrorKind::Parameter: return "parameter error";
    case ErrorKind::Config: return "configuration error";
    case ErrorKind::Inference: return "inference error";
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

}  // namespace fidnp
