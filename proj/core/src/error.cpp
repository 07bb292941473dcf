#include "c2c/error.hpp"

namespace c2c {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "config error";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::lookup: return "lookup error";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::integrity: return "simulation integrity error";
  }
  return "error";
}

}  // namespace c2c
