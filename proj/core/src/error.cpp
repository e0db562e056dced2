#include "colcirc/error.hpp"

namespace colcirc {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::value_out_of_domain: return "value_out_of_domain";
    case Errc::out_of_range: return "out_of_range";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::type_mismatch: return "type_mismatch";
    case Errc::arithmetic_overflow: return "arithmetic_overflow";
    case Errc::not_a_permutation: return "not_a_permutation";
    case Errc::duplicate_position: return "duplicate_position";
    case Errc::slack_segment_present: return "slack_segment_present";
    case Errc::divisibility: return "divisibility";
    case Errc::empty_input: return "empty_input";
    case Errc::not_one_hot: return "not_one_hot";
    case Errc::incompatible_subcolumns: return "incompatible_subcolumns";
    case Errc::missing_input: return "missing_input";
    case Errc::invalid_circuit: return "invalid_circuit";
    case Errc::operator_failure: return "operator_failure";
    case Errc::non_scalar_output: return "non_scalar_output";
    case Errc::cycle: return "cycle";
    case Errc::bijection_incomplete: return "bijection_incomplete";
    case Errc::name_collision: return "name_collision";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::unknown_operator: return "unknown_operator";
    case Errc::unknown_scheme: return "unknown_scheme";
    case Errc::not_encodable: return "not_encodable";
    case Errc::verification_failed: return "verification_failed";
    case Errc::incompatible_schemes: return "incompatible_schemes";
    case Errc::io_error: return "io_error";
    case Errc::parse_error: return "parse_error";
  }
  return "unknown";
}

}  // namespace colcirc
