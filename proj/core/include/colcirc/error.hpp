#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace colcirc {

enum class Errc {
  invalid_argument,
  value_out_of_domain,
  out_of_range,
  length_mismatch,
  type_mismatch,
  arithmetic_overflow,
  not_a_permutation,
  duplicate_position,
  slack_segment_present,
  divisibility,
  empty_input,
  not_one_hot,
  incompatible_subcolumns,
  missing_input,
  invalid_circuit,
  operator_failure,
  non_scalar_output,
  cycle,
  bijection_incomplete,
  name_collision,
  duplicate_id,
  unknown_operator,
  unknown_scheme,
  not_encodable,
  verification_failed,
  incompatible_schemes,
  io_error,
  parse_error,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Raised by evaluation when a vertex's operator fails; carries the vertex id.
class OperatorFailure : public Error {
 public:
  OperatorFailure(std::string vertex, Errc inner, const std::string& message)
      : Error(Errc::operator_failure, "vertex '" + vertex + "': " + message),
        vertex_(std::move(vertex)),
        inner_(inner) {}

  const std::string& vertex() const noexcept { return vertex_; }
  Errc inner_code() const noexcept { return inner_; }

 private:
  std::string vertex_;
  Errc inner_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Errc code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace colcirc
