#pragma once

#include <cstdint>

#include "colcirc/circuit.hpp"

namespace colcirc {

// out = 2 * col + 3, built from Scalar, Length, Replicate and Elementwise
// vertices. Input "col", output "res".
Circuit affine_circuit(const ElementType& type = ElementType::u(64));

struct Q6Params {
  std::uint32_t ship_lo = 8766;   // first day of the year, inclusive
  std::uint32_t ship_hi = 9130;   // last day, inclusive
  std::uint32_t discount_lo = 5;  // percent, inclusive
  std::uint32_t discount_hi = 7;
  std::uint32_t quantity_below = 24;
};

// Revenue query over lineitem-like columns: "shipdate" u32, "discount" u32
// (percent), "quantity" u32, "extendedprice" i64 (cents). Output "revenue" is
// an i64 scalar: sum of extendedprice * discount over qualifying rows.
Circuit q6_circuit(const Q6Params& params = {});

}  // namespace colcirc
