#pragma once

#include <stdexcept>
#include <string>

namespace hirsch {

enum class Errc {
  invalid_argument,
  identity_violated,
  not_greater_than_one,
  no_convergence,
  arc_too_coarse,
  singular_point,
  at_cone_point,
  step_underflow,
  max_events_exceeded,
  family_mismatch,
  invalid_shape,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "INVALID_ARGUMENT";
    case Errc::identity_violated: return "IDENTITY_VIOLATED";
    case Errc::not_greater_than_one: return "NOT_GREATER_THAN_ONE";
    case Errc::no_convergence: return "NO_CONVERGENCE";
    case Errc::arc_too_coarse: return "ARC_TOO_COARSE";
    case Errc::singular_point: return "SINGULAR_POINT";
    case Errc::at_cone_point: return "AT_CONE_POINT";
    case Errc::step_underflow: return "STEP_UNDERFLOW";
    case Errc::max_events_exceeded: return "MAX_EVENTS_EXCEEDED";
    case Errc::family_mismatch: return "FAMILY_MISMATCH";
    case Errc::invalid_shape: return "INVALID_SHAPE";
    case Errc::io_error: return "IO_ERROR";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hirsch
