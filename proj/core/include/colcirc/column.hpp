#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "colcirc/element_type.hpp"

namespace colcirc {

using i128 = __int128;

// A single element, detached from its column. Integers and bits share `integer`.
struct Value {
  enum class Kind : std::uint8_t { unit, integer, real, tuple };

  Kind kind = Kind::unit;
  i128 integer = 0;
  double real = 0.0;
  std::vector<Value> items;

  static Value unit_value() { return Value{}; }
  static Value of_int(i128 v) {
    Value out;
    out.kind = Kind::integer;
    out.integer = v;
    return out;
  }
  static Value of_real(double v) {
    Value out;
    out.kind = Kind::real;
    out.real = v;
    return out;
  }
  static Value of_tuple(std::vector<Value> items) {
    Value out;
    out.kind = Kind::tuple;
    out.items = std::move(items);
    return out;
  }

  std::string to_string() const;
  std::strong_ordering operator<=>(const Value& other) const;
  bool operator==(const Value& other) const { return (*this <=> other) == 0; }
};

std::string int128_to_string(i128 v);

// Immutable column. Copies share storage.
//
// Non-product elements are stored one 64-bit word each (signed values
// sign-extended, floats as IEEE bit patterns) except bit columns, which are
// packed 64 per word LSB-first with zero padding. Product columns hold one
// child column per component.
class Column {
 public:
  Column();

  // `raw` holds one word per element in the storage encoding above (bits as
  // 0/1). Values are checked against the type's domain.
  static Column from_raw(ElementType type, std::vector<std::uint64_t> raw);
  static Column from_ints(ElementType type, const std::vector<i128>& values);
  static Column from_u64(ElementType type, const std::vector<std::uint64_t>& values);
  static Column from_i64(ElementType type, const std::vector<std::int64_t>& values);
  static Column from_reals(ElementType type, const std::vector<double>& values);
  static Column from_bits(const std::vector<bool>& values);
  static Column from_packed_bits(std::vector<std::uint64_t> words, std::size_t length);
  static Column units(std::size_t length);
  static Column zip(std::vector<Column> components);
  static Column from_values(ElementType type, const std::vector<Value>& values);
  static Column scalar(ElementType type, i128 value) { return from_ints(type, {value}); }

  const ElementType& type() const { return type_; }
  std::size_t size() const { return length_; }
  bool empty() const { return length_ == 0; }

  // Storage word of element i (bit columns: 0 or 1).
  std::uint64_t raw(std::size_t i) const {
    if (type_.is_bit()) return ((*words_)[i >> 6] >> (i & 63)) & 1u;
    return (*words_)[i];
  }
  i128 integer(std::size_t i) const {
    return type_.is_signed() ? static_cast<i128>(static_cast<std::int64_t>(raw(i)))
                             : static_cast<i128>(raw(i));
  }
  std::int64_t s64(std::size_t i) const { return static_cast<std::int64_t>(raw(i)); }
  std::uint64_t u64(std::size_t i) const { return raw(i); }
  bool bit(std::size_t i) const { return raw(i) != 0; }
  double real(std::size_t i) const;
  Value value(std::size_t i) const;

  std::size_t arity() const { return components_ ? components_->size() : 0; }
  const Column& component(std::size_t k) const;
  const std::vector<Column>& components() const;

  // Backing words; packed for bit columns, empty for unit/product.
  const std::vector<std::uint64_t>& words() const { return *words_; }

  std::vector<i128> integers() const;
  std::vector<std::uint64_t> raw_values() const;

  bool operator==(const Column& other) const;
  bool operator!=(const Column& other) const { return !(*this == other); }

  std::string to_string(std::size_t max_items = 16) const;

 private:
  ElementType type_;
  std::size_t length_ = 0;
  std::shared_ptr<const std::vector<std::uint64_t>> words_;
  std::shared_ptr<const std::vector<Column>> components_;

  friend class ColumnBuilder;
};

// Append-only construction helper. Single owner until finish().
class ColumnBuilder {
 public:
  explicit ColumnBuilder(ElementType type, std::size_t reserve = 0);

  void push_raw(std::uint64_t word);
  void push_int(i128 v);  // checked against the domain
  void push_real(double v);
  void push_from(const Column& src, std::size_t i);  // non-product only
  std::size_t size() const { return length_; }
  Column finish();

 private:
  ElementType type_;
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

using ColumnFamily = std::map<std::string, Column>;

// Element-index gather that works for every type, including products.
Column take(const Column& src, const std::vector<std::size_t>& indices);
Column slice(const Column& src, std::size_t begin, std::size_t end);
Column empty_column(const ElementType& type);
Column concat(const std::vector<Column>& parts);
// Storage word for an integer value of type t (sign-extended / masked).
std::uint64_t encode_int(const ElementType& t, i128 v);
std::uint64_t encode_real(const ElementType& t, double v);

// make_column: validated construction from detached values.
inline Column make_column(ElementType type, const std::vector<Value>& values) {
  return Column::from_values(std::move(type), values);
}

struct FrequencyTable {
  std::vector<std::pair<Value, std::uint64_t>> entries;  // sorted by value
  std::uint64_t total = 0;

  std::uint64_t count(const Value& v) const;
  std::size_t support_size() const { return entries.size(); }
};

FrequencyTable frequency_distribution(const Column& col);

struct SegmentedViewSpec {
  std::size_t segment_length = 1;
  std::size_t column_length = 0;

  std::size_t segment_count() const {
    return (column_length + segment_length - 1) / segment_length;
  }
  std::size_t segment_size(std::size_t j) const;
  bool has_slack() const { return column_length % segment_length != 0; }
};

Value segmented_get(const Column& col, const SegmentedViewSpec& spec, std::size_t i,
                    std::size_t j);

std::uint64_t column_size_bytes(const Column& col);
std::uint64_t representation_size_bytes(const ColumnFamily& cols);

}  // namespace colcirc
