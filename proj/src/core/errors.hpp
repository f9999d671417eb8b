#pragma once

#include <stdexcept>
#include <string>

namespace fkm {

enum class ErrorCode {
  Domain,      // evaluation outside the slit bundle / non-finite result
  Regularity,  // singular or indefinite metric
  Order,       // derivative order not populated in a jet
  Parameter,   // invalid construction parameter
  Config,      // malformed or inconsistent run configuration
  Degenerate,  // non-invertible fiber Hessian of a Lagrangian
  Stiffness,   // adaptive step underflow
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace fkm
