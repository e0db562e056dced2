#include <algorithm>

#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"

namespace colcirc::ops {

namespace {

std::size_t position(const Column& pos, std::size_t i, std::size_t bound, const char* what) {
  i128 v = pos.integer(i);
  if (v < 0 || v >= static_cast<i128>(bound)) {
    throw Error(Errc::out_of_range, std::string(what) + ": position " + int128_to_string(v) +
                                        " at index " + std::to_string(i) + " not below " +
                                        std::to_string(bound));
  }
  return static_cast<std::size_t>(v);
}

void require_index_column(const Column& c, const char* what) {
  require(c.type().is_integer(), Errc::type_mismatch,
          std::string(what) + " must be an integer column, got " + c.type().to_string());
}

}  // namespace

Column scalar(const ElementType& type, const json& value) {
  if (type.kind() == TypeKind::unit) return Column::units(1);
  if (type.is_float()) {
    require(value.is_number(), Errc::invalid_argument, "scalar value must be numeric");
    return Column::from_reals(type, {value.get<double>()});
  }
  i128 v = 0;
  if (value.is_boolean()) {
    v = value.get<bool>() ? 1 : 0;
  } else if (value.is_number_unsigned()) {
    v = value.get<std::uint64_t>();
  } else if (value.is_number_integer()) {
    v = value.get<std::int64_t>();
  } else {
    fail(Errc::invalid_argument, "scalar value must be an integer or boolean");
  }
  return Column::from_ints(type, {v});
}

Column replicate(const Column& value, std::uint64_t factor) {
  require(value.size() == 1, Errc::length_mismatch, "replicate: value must be a scalar");
  return take(value, std::vector<std::size_t>(factor, 0));
}

Column select(const Column& data, const Column& selection) {
  require(selection.type().is_bit(), Errc::type_mismatch, "select: selection must be bit");
  require(data.size() == selection.size(), Errc::length_mismatch,
          "select: data length " + std::to_string(data.size()) + " vs selection " +
              std::to_string(selection.size()));
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (selection.bit(i)) idx.push_back(i);
  }
  return take(data, idx);
}

Column iota(std::uint64_t n, const ElementType& type) {
  require(type.is_integer(), Errc::type_mismatch, "iota type must be integer");
  require(n == 0 || type.contains(static_cast<i128>(n - 1)), Errc::arithmetic_overflow,
          "iota length exceeds " + type.to_string());
  ColumnBuilder b(type, n);
  for (std::uint64_t i = 0; i < n; ++i) b.push_raw(i);
  return b.finish();
}

bool is_permutation(const Column& pos) {
  if (!pos.type().is_integer()) return false;
  std::size_t n = pos.size();
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    i128 v = pos.integer(i);
    if (v < 0 || v >= static_cast<i128>(n) || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Column permute(const Column& pos, const Column& data) {
  require_index_column(pos, "permute: permutation");
  require(pos.size() == data.size(), Errc::length_mismatch,
          "permute: permutation length " + std::to_string(pos.size()) + " vs data " +
              std::to_string(data.size()));
  std::size_t n = pos.size();
  std::vector<std::size_t> inverse(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    i128 v = pos.integer(i);
    if (v < 0 || v >= static_cast<i128>(n) || seen[static_cast<std::size_t>(v)]) {
      throw Error(Errc::not_a_permutation,
                  "permute: value " + int128_to_string(v) + " at index " + std::to_string(i) +
                      " breaks bijection on 0.." + std::to_string(n));
    }
    seen[static_cast<std::size_t>(v)] = true;
    inverse[static_cast<std::size_t>(v)] = i;
  }
  return take(data, inverse);
}

std::uint64_t length_of(const Column& col) { return col.size(); }

Column concatenate(const std::vector<Column>& cols) { return concat(cols); }

Column scatter(const Column& col, const Column& pos, const Column& data) {
  require_index_column(pos, "scatter: pos");
  require(col.type() == data.type(), Errc::type_mismatch,
          "scatter: data type " + data.type().to_string() + " vs column " + col.type().to_string());
  require(pos.size() == data.size(), Errc::length_mismatch,
          "scatter: pos length " + std::to_string(pos.size()) + " vs data " +
              std::to_string(data.size()));
  std::size_t n = col.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<bool> hit(n, false);
  for (std::size_t j = 0; j < pos.size(); ++j) {
    std::size_t p = position(pos, j, n, "scatter");
    if (hit[p]) {
      throw Error(Errc::duplicate_position, "scatter: position " + std::to_string(p) + " repeated");
    }
    hit[p] = true;
    idx[p] = n + j;
  }
  if (pos.size() == 0) return col;
  return take(concat({col, data}), idx);
}

Column gather(const Column& pos, const Column& data) {
  require_index_column(pos, "gather: pos");
  std::vector<std::size_t> idx(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) idx[i] = position(pos, i, data.size(), "gather");
  return take(data, idx);
}

Column select_indices(const Column& characteristic, const ElementType& type) {
  require(characteristic.type().is_bit(), Errc::type_mismatch,
          "select_indices: input must be bit");
  ColumnBuilder b(type, 0);
  for (std::size_t i = 0; i < characteristic.size(); ++i) {
    if (characteristic.bit(i)) b.push_int(static_cast<i128>(i));
  }
  return b.finish();
}

Column zip(const std::vector<Column>& components) { return Column::zip(components); }

std::vector<Column> unzip(const Column& zipped) {
  require(zipped.type().is_product(), Errc::type_mismatch, "unzip: input must be a product");
  return zipped.components();
}

}  // namespace colcirc::ops
