#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "colcirc/column.hpp"
#include "colcirc/operator.hpp"

// Direct-call forms of the catalog operators. Every function here backs a
// catalog entry of the same behavior; failures throw colcirc::Error.
namespace colcirc::ops {

inline const ElementType kIndexType = ElementType::u(64);

struct ElementwiseSpec {
  std::string fn;
  ElementType type;                  // argument type
  std::optional<ElementType> out_type;  // cast target / widened result
  json constants = json::object();   // "constant", "lo", "hi", "k", "w", "p", "types"
};

int elementwise_arity(const ElementwiseSpec& spec);
std::vector<std::string> elementwise_input_labels(const ElementwiseSpec& spec);
std::vector<Port> elementwise_outputs(const ElementwiseSpec& spec);
std::vector<Column> elementwise(const ElementwiseSpec& spec, const std::vector<Column>& args);

// Shorthands for the common binary forms.
Column add(const Column& a, const Column& b);
Column sub(const Column& a, const Column& b);
Column mul(const Column& a, const Column& b);
Column logical_and(const Column& a, const Column& b);
Column in_range(const Column& a, i128 lo, i128 hi);
Column cast(const Column& a, const ElementType& to);

Column scalar(const ElementType& type, const json& value);
Column replicate(const Column& value, std::uint64_t factor);
Column select(const Column& data, const Column& selection);
Column iota(std::uint64_t n, const ElementType& type = kIndexType);
Column permute(const Column& pos, const Column& data);
std::uint64_t length_of(const Column& col);
Column concatenate(const std::vector<Column>& cols);
Column scatter(const Column& col, const Column& pos, const Column& data);
Column gather(const Column& pos, const Column& data);
Column select_indices(const Column& characteristic, const ElementType& type = kIndexType);

// Returns the transposed column and the new segment length.
std::pair<Column, std::uint64_t> transpose(std::uint64_t segment_length, const Column& col);
std::pair<Column, std::uint64_t> replicate_segments(const Column& col,
                                                    std::uint64_t segment_length,
                                                    std::uint64_t factor);
std::pair<Column, std::uint64_t> replicate_within_segments(const Column& col,
                                                           std::uint64_t segment_length,
                                                           std::uint64_t factor);

Column zip(const std::vector<Column>& components);
std::vector<Column> unzip(const Column& zipped);
Column compose_segments(std::uint64_t segment_length, const Column& col);
Column assemble(std::uint64_t k, const Column& col);

Column derivative(const Column& col);

enum class Aggregate { add, max, min, logical_and, logical_or };
Aggregate parse_aggregate(const std::string& name);
Column prefix_aggregate(const Column& col, Aggregate op, bool inclusive,
                        std::optional<ElementType> out_type = std::nullopt);
Column last(const Column& col);
Column is_same_as_previous(const Column& col);
std::pair<Column, Column> split_first(const Column& col);
std::pair<Column, Column> carve(const Column& col, int w, int p);
bool is_permutation(const Column& pos);

}  // namespace colcirc::ops
