#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bellkcbs {

// Failure taxonomy shared by the whole library.  The C API maps these 1:1
// onto its status codes, so every throw site picks the kind deliberately.
enum class ErrorKind {
  invalid_argument,  // caller passed something outside the documented domain
  domain,            // request is well-formed but mathematically invalid here
  structure,         // data violates a structural invariant (keys, sizes, normalization)
  numeric,           // computation produced an out-of-contract numerical result
  parse,             // malformed serialized input
  io,                // filesystem failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace bellkcbs
