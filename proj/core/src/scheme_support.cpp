#include "scheme_support.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace colcirc::detail {

void expect_labels(const ColumnFamily& f, const std::vector<std::string>& labels) {
  std::set<std::string> want(labels.begin(), labels.end());
  for (const auto& [label, col] : f) {
    check(want.count(label) != 0, "unexpected column '" + label + "'");
  }
  for (const auto& label : want) check(f.count(label) != 0, "missing column '" + label + "'");
}

const Column& need(const ColumnFamily& f, const std::string& label) {
  auto it = f.find(label);
  if (it == f.end()) throw Error(Errc::missing_input, "missing column '" + label + "'");
  return it->second;
}

const Column& need_typed(const ColumnFamily& f, const std::string& label, const ElementType& t) {
  const Column& c = need(f, label);
  check(c.type() == t, "column '" + label + "' has type " + c.type().to_string() + ", expected " +
                           t.to_string());
  return c;
}

void expect_index_type(const Column& c, const std::string& label) {
  check(c.type().is_integer(), "column '" + label + "' must hold integers");
  for (std::size_t i = 0; i < c.size(); ++i) {
    check(c.integer(i) >= 0, "column '" + label + "' has a negative value at " + std::to_string(i));
  }
}

std::uint64_t need_scalar(const ColumnFamily& f, const std::string& label) {
  const Column& c = need(f, label);
  check(c.size() == 1, "'" + label + "' must be a scalar (length 1), has length " +
                           std::to_string(c.size()));
  expect_index_type(c, label);
  return c.u64(0);
}

const Column& input_column(const ColumnFamily& in) {
  auto it = in.find(kColumnLabel);
  require(it != in.end() && in.size() == 1, Errc::invalid_argument,
          "expected a single input column labeled 'column'");
  return it->second;
}

ElementType ptype(const json& p, const char* key, const ElementType& fallback) {
  return param_type_or(p, key, fallback);
}

Column index_column(const ElementType& t, const std::vector<std::uint64_t>& v, const char* what) {
  ColumnBuilder b(t, v.size());
  for (auto x : v) {
    if (!t.contains(static_cast<i128>(x))) {
      not_encodable(std::string(what) + ": value " + std::to_string(x) + " does not fit " +
                    t.to_string());
    }
    b.push_int(static_cast<i128>(x));
  }
  return b.finish();
}

Column int_column(const ElementType& t, const std::vector<i128>& v, const char* what) {
  ColumnBuilder b(t, v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!t.contains(v[i])) {
      not_encodable(std::string(what) + ": value " + int128_to_string(v[i]) + " at index " +
                    std::to_string(i) + " does not fit " + t.to_string());
    }
    b.push_int(v[i]);
  }
  return b.finish();
}

Column scalar_of(const ElementType& t, i128 v, const char* what) { return int_column(t, {v}, what); }

std::vector<std::uint64_t> indices_of(const Column& c) {
  std::vector<std::uint64_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    require(c.integer(i) >= 0, Errc::out_of_range, "negative index");
    out[i] = c.u64(i);
  }
  return out;
}

bool strictly_increasing(const Column& c) {
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (!(c.value(i - 1) < c.value(i))) return false;
  }
  return true;
}

bool distinct_below(const Column& c, std::uint64_t bound) {
  std::vector<bool> seen(bound, false);
  for (std::size_t i = 0; i < c.size(); ++i) {
    i128 v = c.integer(i);
    if (v < 0 || v >= static_cast<i128>(bound)) return false;
    if (seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

std::uint64_t total_of(const Column& lengths) {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    check(lengths.integer(i) >= 0, "negative length");
    t += lengths.u64(i);
  }
  return t;
}

ElementType narrowest_signed(i128 lo, i128 hi) {
  for (int w : {8, 16, 32, 64}) {
    ElementType t = ElementType::i(w);
    if (t.contains(lo) && t.contains(hi)) return t;
  }
  not_encodable("range " + int128_to_string(lo) + ".." + int128_to_string(hi) + " exceeds 64 bits");
}

ElementType narrowest_fitting(i128 lo, i128 hi) {
  if (lo >= 0) {
    if (hi > static_cast<i128>(std::numeric_limits<std::uint64_t>::max())) {
      not_encodable("value " + int128_to_string(hi) + " exceeds 64 bits");
    }
    return narrowest_unsigned(static_cast<std::uint64_t>(hi));
  }
  return narrowest_signed(lo, hi);
}

std::pair<i128, i128> int_range(const Column& c) {
  require(c.size() > 0 && c.type().is_integer(), Errc::invalid_argument,
          "range of an empty or non-integer column");
  i128 lo = c.integer(0), hi = lo;
  for (std::size_t i = 1; i < c.size(); ++i) {
    lo = std::min(lo, c.integer(i));
    hi = std::max(hi, c.integer(i));
  }
  return {lo, hi};
}

Column column_of(const ElementType& t, const std::vector<i128>& v, const char* what) {
  return int_column(t, v, what);
}

Column zero_scalar(const ElementType& t) {
  if (t.is_product()) {
    std::vector<Column> parts;
    for (const auto& c : t.components()) parts.push_back(zero_scalar(c));
    return Column::zip(parts);
  }
  if (t.kind() == TypeKind::unit) return Column::units(1);
  ColumnBuilder b(t, 1);
  b.push_raw(0);
  return b.finish();
}

std::vector<std::int64_t> param_int_list(const json& p, const char* key) {
  require(p.contains(key) && p[key].is_array(), Errc::invalid_argument,
          std::string("parameter '") + key + "' must be a list of integers");
  std::vector<std::int64_t> out;
  for (const auto& v : p[key]) {
    require(v.is_number_integer(), Errc::invalid_argument,
            std::string("parameter '") + key + "' must be a list of integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

Wire scalar_op(CircuitBuilder& b, const std::string& fn, const Wire& a, const Wire& c) {
  return b.ew(fn, {b.cast(a, kU64), b.cast(c, kU64)});
}

Wire broadcast(CircuitBuilder& b, const Wire& scalar, const Wire& like) {
  return b.replicate(scalar, b.length(like));
}

Wire span_of(CircuitBuilder& b, const Wire& pos) {
  Wire p1 = b.ew_const("add", b.cast(pos, kU64), 1);
  Wire padded = b.concat({b.constant(kU64, 0), p1});
  return b.last(b.prefix(padded, "max", true, kU64));
}

Wire sort_indices(CircuitBuilder& b, const Wire& elements, const Wire& full) {
  Wire zero = b.constant(ElementType::bit(), 0);
  Wire one = b.constant(ElementType::bit(), 1);
  Wire canvas = b.replicate(zero, b.cast(full, kU64));
  Wire marks = b.scatter(canvas, elements, broadcast(b, one, elements));
  return b.select_indices(marks, elements.type);
}

std::pair<Wire, Wire> sort_subcolumn(CircuitBuilder& b, const Wire& pos, const Wire& data) {
  Wire span = span_of(b, pos);
  Wire zero = b.constant(kU64, 0);
  Wire order = b.iota(b.length(pos));
  Wire slot = b.scatter(b.replicate(zero, span), pos, order);
  Wire zbit = b.constant(ElementType::bit(), 0);
  Wire obit = b.constant(ElementType::bit(), 1);
  Wire marks = b.scatter(b.replicate(zbit, span), pos, broadcast(b, obit, pos));
  Wire sorted_pos = b.select_indices(marks, pos.type);
  Wire which = b.select(slot, marks);
  return {sorted_pos, b.gather(which, data)};
}

std::pair<Wire, Wire> expand_ranges(CircuitBuilder& b, const Wire& starts, const Wire& lengths) {
  Wire len64 = b.cast(lengths, kU64);
  Wire elem = b.expand_runs(len64);
  Wire first = b.prefix(len64, "add", false, kU64);
  Wire unit_index = b.iota(b.length(elem));
  Wire offset = b.ew("sub", {unit_index, b.gather(elem, first)});
  Wire source = b.ew("add", {b.gather(elem, b.cast(starts, kU64)), offset});
  return {source, elem};
}

std::pair<Wire, Wire> div_mod_index(CircuitBuilder& b, const Wire& n, const Wire& l) {
  Wire idx = b.iota(b.cast(n, kU64));
  Wire ll = broadcast(b, b.cast(l, kU64), idx);
  return {b.ew("div", {idx, ll}), b.ew("mod", {idx, ll})};
}

void register_range_checked(CodecRegistry& reg, CodecEntry e) {
  auto structural = e.verify;
  auto decoder = e.build_decoder;
  e.verify = [structural, decoder](const json& p, const ColumnFamily& c) {
    VerifyResult v = structural(p, c);
    if (!v) return v;
    try {
      evaluate_circuit(decoder(p, types_of(c)), c);
    } catch (const Error& err) {
      reject(std::string("decoded values out of range: ") + err.what());
    }
    return v;
  };
  reg.register_codec(std::move(e));
}

Column host_decode(const SchemeInstance& inst, const CodecRegistry& reg) {
  return decode_column(inst, reg);
}

}  // namespace colcirc::detail
