#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace zk {

// Error taxonomy shared by the C++ core and the C API.  Every failure that
// crosses a module boundary is one of these codes plus a human readable
// message; callers that need to branch do so on the code, never the text.
enum class Err {
  invalid_input = 1,   // argument outside the documented domain
  precondition = 2,    // state fails a documented runtime precondition
  resolution = 3,      // grid cannot represent the requested object
  truncation = 4,      // domain truncation dominates the requested tolerance
  quadrature = 5,      // adaptive integration failed to converge
  no_contraction = 6,  // fixed point iteration is not contracting
  instability = 7,     // time stepper detected blow-up
  format = 8,          // malformed file or config payload
  io = 9,              // filesystem failure
  unsupported = 10,    // valid request outside the implemented range
  internal = 11,       // invariant violation: a bug, not a user error
};

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool ok, Err code, const std::string& msg) {
  if (!ok) fail(code, msg);
}

}  // namespace zk
