#pragma once

#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "colcirc/circuit_builder.hpp"
#include "colcirc/codec.hpp"

namespace colcirc {
// Readable gtest failure output.
inline void PrintTo(const Column& c, std::ostream* os) {
  *os << c.type().to_string() << " " << c.to_string(64);
}
}  // namespace colcirc

namespace colcirc::testing {

using Rng = std::mt19937_64;

std::int64_t draw(Rng& rng, std::int64_t lo, std::int64_t hi);
Column random_ints(Rng& rng, const ElementType& t, std::size_t n, std::int64_t lo, std::int64_t hi);
Column random_bits(Rng& rng, std::size_t n, double p_one = 0.5);
// Distinct values from 0..domain-1, in random order.
std::vector<std::uint64_t> random_subset(Rng& rng, std::uint64_t domain, std::size_t m);

// A valid encoder input for a builtin scheme, with parameters.
struct SchemeCase {
  std::string scheme_id;
  json params = json::object();
  ColumnFamily input;
};
SchemeCase random_case(const std::string& scheme_id, Rng& rng);

// Modifies an accepted encoded form so that it breaks one of the scheme's
// verifier constraints. `what` names the constraint. nullopt when this
// instance has no room for any of the scheme's corruptions.
struct Corruption {
  SchemeInstance instance;
  std::string what;
};
std::optional<Corruption> corrupt(const SchemeInstance& inst, Rng& rng);

// Random valid circuit over i64 columns. Inputs "x0".."x{k-1}" of one length
// plus "perm", a permutation of 0..n-1 (u64). Every vertex output is total on
// inputs from random_circuit_inputs.
struct RandomCircuit {
  Circuit circuit;
  std::vector<std::string> creation_order;  // vertex ids, inputs before users
  std::vector<std::string> noop_ids;        // NoOp vertices spliced into data paths
};
RandomCircuit random_circuit(Rng& rng, int vertices);
ColumnFamily random_circuit_inputs(const Circuit& c, Rng& rng, std::size_t n);

// Identity on i64 columns of length >= 1, built as Derivative, PrefixSum and
// the head added back. Input "col", output "res".
Circuit derivative_identity_circuit(const ElementType& t);

}  // namespace colcirc::testing
