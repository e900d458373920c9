#pragma once

#include <stdexcept>
#include <string>

namespace gaugeopt {

enum class ErrorCode {
  dimension_mismatch,
  invalid_argument,
  not_on_boundary,
  ambiguous_normal,
  not_interior,
  unsupported,
  non_finite,
  empty_level_set,
  invalid_bracket,
  no_convergence,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gaugeopt
