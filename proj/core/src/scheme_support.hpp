#pragma once

// Shared plumbing for the builtin scheme registrations. Not installed.

#include <cstdint>
#include <string>
#include <vector>

#include "colcirc/circuit_builder.hpp"
#include "colcirc/codec.hpp"
#include "colcirc/error.hpp"

namespace colcirc::detail {

inline const ElementType kU64 = ElementType::u(64);
inline const ElementType kI64 = ElementType::i(64);
inline const ElementType kU32 = ElementType::u(32);

[[noreturn]] inline void reject(const std::string& why) { throw Error(Errc::verification_failed, why); }
inline void check(bool ok, const std::string& why) {
  if (!ok) reject(why);
}
[[noreturn]] inline void not_encodable(const std::string& why) { throw Error(Errc::not_encodable, why); }

// Exact label set of an encoded or decoded family.
void expect_labels(const ColumnFamily& f, const std::vector<std::string>& labels);
const Column& need(const ColumnFamily& f, const std::string& label);
const Column& need_typed(const ColumnFamily& f, const std::string& label, const ElementType& t);
// Length-1 non-negative integer column.
std::uint64_t need_scalar(const ColumnFamily& f, const std::string& label);
void expect_index_type(const Column& c, const std::string& label);

// The single "column" of a single-column input family.
const Column& input_column(const ColumnFamily& in);

ElementType ptype(const json& p, const char* key, const ElementType& fallback);

// Checked construction of index-like columns; overflow is not-encodable.
Column index_column(const ElementType& t, const std::vector<std::uint64_t>& v, const char* what);
Column int_column(const ElementType& t, const std::vector<i128>& v, const char* what);
Column scalar_of(const ElementType& t, i128 v, const char* what);

std::vector<std::uint64_t> indices_of(const Column& c);
bool strictly_increasing(const Column& c);
// Values distinct and below `bound`.
bool distinct_below(const Column& c, std::uint64_t bound);
std::uint64_t total_of(const Column& lengths);

// Narrowest integer type holding lo..hi: unsigned when lo >= 0.
ElementType narrowest_fitting(i128 lo, i128 hi);
ElementType narrowest_signed(i128 lo, i128 hi);
// Min and max of a non-empty integer column.
std::pair<i128, i128> int_range(const Column& c);
// Integer column from decoded values, checked against `t`.
Column column_of(const ElementType& t, const std::vector<i128>& v, const char* what);
// Length-1 column of the all-zero element of `t`.
Column zero_scalar(const ElementType& t);
// Parameter that must be a list of integers.
std::vector<std::int64_t> param_int_list(const json& p, const char* key);

// Decoder-side gadgets.
// Canonical subcolumn: sorts (pos, data) by position. pos must be distinct.
std::pair<Wire, Wire> sort_subcolumn(CircuitBuilder& b, const Wire& pos, const Wire& data);
// Sorted distinct index column; `full` is the domain size scalar (u64).
Wire sort_indices(CircuitBuilder& b, const Wire& elements, const Wire& full);
// max(col) + 1 as a u64 scalar, 0 when empty.
Wire span_of(CircuitBuilder& b, const Wire& pos);
// Scalar a `fn` scalar b (u64 scalars).
Wire scalar_op(CircuitBuilder& b, const std::string& fn, const Wire& a, const Wire& c);
// Per-element: start[seg] + (i - first_index_of_seg), expanding variable-width
// ranges into source positions. Returns (source positions, element id of each unit).
std::pair<Wire, Wire> expand_ranges(CircuitBuilder& b, const Wire& starts, const Wire& lengths);
// iota(n) broadcast-divided by a scalar: i / l and i % l.
std::pair<Wire, Wire> div_mod_index(CircuitBuilder& b, const Wire& n, const Wire& l);
// Broadcast a scalar to the length of `like`.
Wire broadcast(CircuitBuilder& b, const Wire& scalar, const Wire& like);

// Registers `e` with its verifier extended by a trial run of the decoder, for
// schemes whose validity includes arithmetic range conditions.
void register_range_checked(CodecRegistry& reg, CodecEntry e);

// Host-side equivalents used by encoders and verifiers.
Column host_decode(const SchemeInstance& inst, const CodecRegistry& reg);

void register_representation_schemes(CodecRegistry& reg);
void register_numeric_schemes(CodecRegistry& reg);
void register_dictionary_schemes(CodecRegistry& reg);
void register_composed_schemes(CodecRegistry& reg);

}  // namespace colcirc::detail
