#pragma once

#include <stdexcept>
#include <string>

namespace c2c {

enum class ErrorKind {
  config,      // bad or unknown configuration
  parse,       // malformed input file
  validation,  // well-formed input violating a data contract
  lookup,      // unknown identifier requested
  infeasible,  // demand that cannot be met (e.g. RB planning in outage)
  integrity,   // simulation invariant broken (vehicle overlap)
};

const char* to_string(ErrorKind kind) noexcept;

// Single exception type for the library. The kind decides the CLI exit code;
// the message carries whatever context (line, vehicle, tick) was available.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Same kind, message prefixed with `context: `.
  Error with_context(const std::string& context) const {
    return Error(kind_, context + ": " + what());
  }

 private:
  ErrorKind kind_;
};

}  // namespace c2c
