#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cayley {

enum class ErrorCode {
  degree_overflow,
  non_orthonormal,
  rank_deficient,
  near_complex,
  partially_complex,
  non_cayley,
  outside_chart,
  step_underflow,
  boundary_stencil,
  non_periodic,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cayley
