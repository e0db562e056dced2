#include <limits>

#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"

namespace colcirc::ops {

Column derivative(const Column& col) {
  require(col.size() >= 1, Errc::empty_input, "derivative: empty input");
  const auto& t = col.type();
  if (t.is_float()) {
    ColumnBuilder b(t, col.size() - 1);
    for (std::size_t i = 0; i + 1 < col.size(); ++i) b.push_real(col.real(i + 1) - col.real(i));
    return b.finish();
  }
  require(t.is_integer(), Errc::type_mismatch, "derivative: numeric input required");
  ElementType out = widened_signed(t);
  ColumnBuilder b(out, col.size() - 1);
  for (std::size_t i = 0; i + 1 < col.size(); ++i) {
    i128 d = col.integer(i + 1) - col.integer(i);
    if (!out.contains(d)) {
      throw Error(Errc::arithmetic_overflow,
                  "derivative: difference at index " + std::to_string(i) + " exceeds " +
                      out.to_string());
    }
    b.push_raw(static_cast<std::uint64_t>(d));
  }
  return b.finish();
}

Aggregate parse_aggregate(const std::string& name) {
  if (name == "add") return Aggregate::add;
  if (name == "max") return Aggregate::max;
  if (name == "min") return Aggregate::min;
  if (name == "and") return Aggregate::logical_and;
  if (name == "or") return Aggregate::logical_or;
  fail(Errc::invalid_argument, "unknown aggregate '" + name + "'");
}

Column prefix_aggregate(const Column& col, Aggregate op, bool inclusive,
                        std::optional<ElementType> out_type) {
  ElementType t = out_type.value_or(col.type());
  std::size_t n = col.size();
  ColumnBuilder b(t, n);
  if (t.is_float()) {
    require(col.type().is_numeric(), Errc::type_mismatch, "prefix_aggregate: numeric input");
    require(op == Aggregate::add || op == Aggregate::max || op == Aggregate::min,
            Errc::invalid_argument, "prefix_aggregate: bitwise aggregate on floats");
    double acc = op == Aggregate::add   ? 0.0
                 : op == Aggregate::max ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double x = col.real(i);
      double next = op == Aggregate::add ? acc + x : op == Aggregate::max ? std::max(acc, x)
                                                                          : std::min(acc, x);
      if (inclusive) {
        b.push_real(next);
        acc = next;
      } else {
        b.push_real(acc);
        acc = next;
      }
    }
    return b.finish();
  }
  require(t.is_exact() && col.type().is_exact(), Errc::type_mismatch,
          "prefix_aggregate: integer or bit input required");
  std::uint64_t ones = t.is_signed() || t.width() == 64 ? ~0ull : ((1ull << t.width()) - 1);
  if (op == Aggregate::logical_and || op == Aggregate::logical_or) {
    require(!t.is_signed(), Errc::type_mismatch, "prefix_aggregate: bitwise op on signed type");
  }
  i128 acc = 0;
  switch (op) {
    case Aggregate::add: acc = 0; break;
    case Aggregate::max: acc = t.min_value(); break;
    case Aggregate::min: acc = t.max_value(); break;
    case Aggregate::logical_and: acc = static_cast<i128>(ones); break;
    case Aggregate::logical_or: acc = 0; break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    i128 x = col.integer(i);
    i128 next = 0;
    switch (op) {
      case Aggregate::add: next = acc + x; break;
      case Aggregate::max: next = acc < x ? x : acc; break;
      case Aggregate::min: next = x < acc ? x : acc; break;
      case Aggregate::logical_and:
        next = static_cast<i128>(static_cast<std::uint64_t>(acc) & static_cast<std::uint64_t>(x));
        break;
      case Aggregate::logical_or:
        next = static_cast<i128>(static_cast<std::uint64_t>(acc) | static_cast<std::uint64_t>(x));
        break;
    }
    if (!t.contains(next)) {
      throw Error(Errc::arithmetic_overflow, "prefix_aggregate: running value at index " +
                                                 std::to_string(i) + " exceeds " + t.to_string());
    }
    b.push_raw(static_cast<std::uint64_t>(inclusive ? next : acc));
    acc = next;
  }
  return b.finish();
}

Column last(const Column& col) {
  require(col.size() >= 1, Errc::empty_input, "last: empty input");
  return slice(col, col.size() - 1, col.size());
}

Column is_same_as_previous(const Column& col) {
  ColumnBuilder b(ElementType::bit(), col.size());
  bool product = col.type().is_product();
  for (std::size_t i = 0; i < col.size(); ++i) {
    bool same = false;
    if (i > 0) same = product ? col.value(i) == col.value(i - 1) : col.raw(i) == col.raw(i - 1);
    b.push_raw(same ? 1 : 0);
  }
  return b.finish();
}

std::pair<Column, Column> split_first(const Column& col) {
  require(col.size() >= 1, Errc::empty_input, "split_first: empty input");
  return {slice(col, 0, 1), slice(col, 1, col.size())};
}

std::pair<Column, Column> carve(const Column& col, int w, int p) {
  require(0 < p && p < w && w <= 64, Errc::invalid_argument, "carve requires 0 < p < w <= 64");
  require(col.type().is_unsigned(), Errc::type_mismatch, "carve: unsigned input required");
  int low_bits = w - p;
  ColumnBuilder pre(ElementType::u(p), col.size());
  ColumnBuilder suf(ElementType::u(low_bits), col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    std::uint64_t x = col.raw(i);
    if (w < 64 && (x >> w) != 0) {
      throw Error(Errc::value_out_of_domain, "carve: value " + std::to_string(x) + " at index " +
                                                 std::to_string(i) + " exceeds " +
                                                 std::to_string(w) + " bits");
    }
    pre.push_raw(x >> low_bits);
    suf.push_raw(x & ((std::uint64_t{1} << low_bits) - 1));
  }
  return {pre.finish(), suf.finish()};
}

}  // namespace colcirc::ops
