#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "colcirc/circuit.hpp"
#include "colcirc/codec.hpp"

// Host-level helpers around the builtin schemes: subcolumn algebra, partition
// materialization, variable-width access, fitting, and compressed-domain
// evaluation.
namespace colcirc {

// Standard subcolumn representation: distinct positions with their data.
struct Subcolumn {
  Column pos;
  Column data;

  ColumnFamily family() const { return {{"pos", pos}, {"data", data}}; }
  static Subcolumn from(const ColumnFamily& f);
  bool operator==(const Subcolumn&) const = default;
};

// Sorted by position. Throws duplicate_position.
Subcolumn canonical_subcolumn(const Subcolumn& sc);
// Agrees with `top` on its domain and with `base` elsewhere. Canonical.
Subcolumn subcolumn_overlay(const Subcolumn& base, const Subcolumn& top);
// Throws incompatible_subcolumns if the two disagree on a shared position.
Subcolumn subcolumn_union(const Subcolumn& a, const Subcolumn& b);
// a ⊑ b: every position of a is in b with the same value.
bool subcolumn_contained(const Subcolumn& a, const Subcolumn& b);

// Part j holds the increasing indices i with partition[i] == j.
std::vector<Column> partition_materialize(const Column& partition, std::uint64_t k,
                                          const ElementType& index_type = ElementType::u(32));
// Circuit from input "partition" to outputs "pos0".."pos{k-1}".
Circuit partition_materialization_circuit(const ElementType& part_type, std::uint64_t k,
                                          const ElementType& index_type = ElementType::u(32));
// Relabels parts by order of first occurrence.
Column canonical_partition(const Column& partition);

// Element i of a canonical variable-width family {length, data}.
Column varwidth_element(const ColumnFamily& vw, std::size_t i);
// Canonical family from a list of elements of base type `type`.
ColumnFamily make_varwidth(const ElementType& type, const std::vector<Column>& elements,
                           const ElementType& length_type = ElementType::u(32));

// Integer coefficients c with sum_j c[j] * x^j == y[x] for x = 0..|y|-1, using
// `k` coefficients; nullopt if no such integral polynomial exists.
std::optional<std::vector<i128>> fit_integer_polynomial(const std::vector<i128>& y, int k);
i128 eval_polynomial(const std::vector<i128>& coeffs, i128 x);

// Compressed-domain evaluation.
// Sum of the decoded column of a run.rle / run.full / run.rle.capped instance.
i128 rle_sum(const SchemeInstance& inst);
// Bit column marking rows equal to `v`, computed on the indices of a
// dict.unique or dict.monotone instance.
Column dict_select_eq(const SchemeInstance& inst, const Value& v);
// Number of patches stored in a delta.patched instance.
std::uint64_t patch_count(const SchemeInstance& inst);

}  // namespace colcirc
