#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "colcirc/codec.hpp"
#include "colcirc/sample_circuits.hpp"

// Reference computations that do not go through circuits or decoders.
namespace colcirc::testing {

// Row loop over the lineitem columns used by q6_circuit.
i128 q6_revenue(const ColumnFamily& lineitem, const Q6Params& params = {});

// E[max of k iid geometric widths], W >= 1 with success probability p:
// sum over w >= 0 of 1 - (1 - (1-p)^w)^k, truncated once terms vanish.
double expected_max_geometric(int k, double p);

// Bits of an encoded index set: sum of width * length over all columns except
// the domain length scalar.
std::uint64_t index_set_bits(const SchemeInstance& inst);

// Decoded column of a run-length family {value, length}, expanded on the host.
std::vector<i128> expand_runs(const Column& value, const Column& length);

// Fewest positions of `c` whose values must be patched after decoding so that
// the remaining values form a chain whose steps fit in a signed delta of
// `delta_bits` bits. Exhaustive over subsets in increasing size.
std::size_t min_decompressed_patches(const std::vector<i128>& c, int delta_bits);

// Fewest patches in the delta column: differences outside the delta type.
std::size_t min_compressed_patches(const std::vector<i128>& c, int delta_bits);

}  // namespace colcirc::testing
