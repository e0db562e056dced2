#include "colcirc/sample_circuits.hpp"

#include "colcirc/circuit_builder.hpp"

namespace colcirc {

Circuit affine_circuit(const ElementType& type) {
  CircuitBuilder b;
  Wire col = b.input("col", type);
  Wire two = b.constant(type, 2);
  Wire three = b.constant(type, 3);
  Wire n = b.length(col);
  Wire twos = b.replicate(two, n);
  Wire threes = b.replicate(three, n);
  Wire doubled = b.ew("mul", {twos, col});
  b.output("res", b.ew("add", {doubled, threes}));
  return b.build();
}

Circuit q6_circuit(const Q6Params& p) {
  const ElementType u32 = ElementType::u(32);
  const ElementType i64 = ElementType::i(64);
  CircuitBuilder b;
  Wire ship = b.input("shipdate", u32);
  Wire disc = b.input("discount", u32);
  Wire qty = b.input("quantity", u32);
  Wire price = b.input("extendedprice", i64);
  Wire in_ship = b.ew("in_range", {ship}, json{{"lo", p.ship_lo}, {"hi", p.ship_hi}});
  Wire in_disc = b.ew("in_range", {disc}, json{{"lo", p.discount_lo}, {"hi", p.discount_hi}});
  Wire small = b.ew_const("lt", qty, p.quantity_below);
  Wire mask = b.ew("and", {b.ew("and", {in_ship, in_disc}), small});
  Wire sel_price = b.select(price, mask);
  Wire sel_disc = b.cast(b.select(disc, mask), i64);
  Wire product = b.ew("mul", {sel_price, sel_disc});
  b.output("revenue", b.sum(product, i64));
  return b.build();
}

}  // namespace colcirc
