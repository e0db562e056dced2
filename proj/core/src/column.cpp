#include "colcirc/column.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "colcirc/error.hpp"

namespace colcirc {

namespace {

const std::shared_ptr<const std::vector<std::uint64_t>>& empty_words() {
  static const auto words = std::make_shared<const std::vector<std::uint64_t>>();
  return words;
}

bool raw_in_domain(const ElementType& t, std::uint64_t w) {
  switch (t.kind()) {
    case TypeKind::unsigned_int: return t.width() == 64 || (w >> t.width()) == 0;
    case TypeKind::signed_int: {
      auto v = static_cast<std::int64_t>(w);
      return t.contains(v);
    }
    case TypeKind::floating: return t.width() == 64 || (w >> 32) == 0;
    case TypeKind::bit: return w <= 1;
    case TypeKind::unit: return w == 0;
    default: return false;
  }
}

}  // namespace

std::string int128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string digits;
  while (mag) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  if (neg) digits.push_back('-');
  std::reverse(digits.begin(), digits.end());
  return digits;
}

std::string Value::to_string() const {
  switch (kind) {
    case Kind::unit: return "()";
    case Kind::integer: return int128_to_string(integer);
    case Kind::real: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", real);
      return buf;
    }
    case Kind::tuple: {
      std::string out = "(";
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += ",";
        out += items[k].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

std::strong_ordering Value::operator<=>(const Value& other) const {
  if (kind != other.kind) return kind <=> other.kind;
  switch (kind) {
    case Kind::unit: return std::strong_ordering::equal;
    case Kind::integer: return integer <=> other.integer;
    case Kind::real: {
      // Bit-exact total order: compare numerically, tie-break on bit pattern.
      if (real < other.real) return std::strong_ordering::less;
      if (real > other.real) return std::strong_ordering::greater;
      return std::bit_cast<std::uint64_t>(real) <=> std::bit_cast<std::uint64_t>(other.real);
    }
    case Kind::tuple: {
      std::size_t n = std::min(items.size(), other.items.size());
      for (std::size_t k = 0; k < n; ++k) {
        auto c = items[k] <=> other.items[k];
        if (c != 0) return c;
      }
      return items.size() <=> other.items.size();
    }
  }
  return std::strong_ordering::equal;
}

std::uint64_t encode_int(const ElementType& t, i128 v) {
  require(t.is_exact(), Errc::type_mismatch, "integer value for type " + t.to_string());
  if (!t.contains(v)) {
    throw Error(Errc::value_out_of_domain,
                "value " + int128_to_string(v) + " outside domain of " + t.to_string());
  }
  return static_cast<std::uint64_t>(v);
}

std::uint64_t encode_real(const ElementType& t, double v) {
  require(t.is_float(), Errc::type_mismatch, "real value for type " + t.to_string());
  if (t.width() == 32) return std::bit_cast<std::uint32_t>(static_cast<float>(v));
  return std::bit_cast<std::uint64_t>(v);
}

Column::Column() : type_(ElementType::unit()), words_(empty_words()) {}

Column Column::from_raw(ElementType type, std::vector<std::uint64_t> raw) {
  require(!type.is_product(), Errc::type_mismatch, "from_raw on product type");
  require(type.kind() != TypeKind::bottom || raw.empty(), Errc::value_out_of_domain,
          "bottom type admits no values");
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!raw_in_domain(type, raw[i])) {
      throw Error(Errc::value_out_of_domain, "index " + std::to_string(i) + ": raw value " +
                                                 std::to_string(raw[i]) + " outside domain of " +
                                                 type.to_string());
    }
  }
  Column c;
  c.type_ = type;
  c.length_ = raw.size();
  if (type.is_bit()) {
    std::vector<std::uint64_t> packed((raw.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < raw.size(); ++i) packed[i >> 6] |= raw[i] << (i & 63);
    c.words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(packed));
  } else if (type.kind() == TypeKind::unit || type.kind() == TypeKind::bottom) {
    c.words_ = empty_words();
  } else {
    c.words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(raw));
  }
  return c;
}

Column Column::from_ints(ElementType type, const std::vector<i128>& values) {
  std::vector<std::uint64_t> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!type.is_exact() || !type.contains(values[i])) {
      throw Error(Errc::value_out_of_domain, "index " + std::to_string(i) + ": value " +
                                                 int128_to_string(values[i]) +
                                                 " outside domain of " + type.to_string());
    }
    raw[i] = static_cast<std::uint64_t>(values[i]);
  }
  return from_raw(std::move(type), std::move(raw));
}

Column Column::from_u64(ElementType type, const std::vector<std::uint64_t>& values) {
  if (type.is_unsigned() || type.is_bit()) return from_raw(std::move(type), values);
  std::vector<i128> wide(values.begin(), values.end());
  return from_ints(std::move(type), wide);
}

Column Column::from_i64(ElementType type, const std::vector<std::int64_t>& values) {
  std::vector<i128> wide(values.begin(), values.end());
  return from_ints(std::move(type), wide);
}

Column Column::from_reals(ElementType type, const std::vector<double>& values) {
  std::vector<std::uint64_t> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) raw[i] = encode_real(type, values[i]);
  return from_raw(std::move(type), std::move(raw));
}

Column Column::from_bits(const std::vector<bool>& values) {
  std::vector<std::uint64_t> packed((values.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i]) packed[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  return from_packed_bits(std::move(packed), values.size());
}

Column Column::from_packed_bits(std::vector<std::uint64_t> words, std::size_t length) {
  require(words.size() == (length + 63) / 64, Errc::length_mismatch, "packed bit word count");
  if (length % 64 != 0 && !words.empty()) words.back() &= (std::uint64_t{1} << (length % 64)) - 1;
  Column c;
  c.type_ = ElementType::bit();
  c.length_ = length;
  c.words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words));
  return c;
}

Column Column::units(std::size_t length) {
  Column c;
  c.length_ = length;
  return c;
}

Column Column::zip(std::vector<Column> components) {
  require(!components.empty(), Errc::invalid_argument, "zip needs at least one component");
  std::vector<ElementType> types;
  for (const auto& comp : components) {
    require(comp.size() == components.front().size(), Errc::length_mismatch,
            "zip components differ in length");
    types.push_back(comp.type());
  }
  Column c;
  c.type_ = ElementType::product(std::move(types));
  c.length_ = components.front().size();
  c.components_ = std::make_shared<const std::vector<Column>>(std::move(components));
  return c;
}

Column Column::from_values(ElementType type, const std::vector<Value>& values) {
  if (type.is_product()) {
    const auto& parts = type.components();
    std::vector<std::vector<Value>> split(parts.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto& v = values[i];
      if (v.kind != Value::Kind::tuple || v.items.size() != parts.size()) {
        throw Error(Errc::value_out_of_domain, "index " + std::to_string(i) + ": value " +
                                                   v.to_string() + " is not a " +
                                                   std::to_string(parts.size()) + "-tuple");
      }
      for (std::size_t k = 0; k < parts.size(); ++k) split[k].push_back(v.items[k]);
    }
    std::vector<Column> comps;
    for (std::size_t k = 0; k < parts.size(); ++k) comps.push_back(from_values(parts[k], split[k]));
    return zip(std::move(comps));
  }
  std::vector<std::uint64_t> raw(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& v = values[i];
    bool ok = false;
    if (type.is_exact() && v.kind == Value::Kind::integer && type.contains(v.integer)) {
      raw[i] = static_cast<std::uint64_t>(v.integer);
      ok = true;
    } else if (type.is_float() && (v.kind == Value::Kind::real || v.kind == Value::Kind::integer)) {
      raw[i] = encode_real(type, v.kind == Value::Kind::real ? v.real
                                                            : static_cast<double>(v.integer));
      ok = true;
    } else if (type.kind() == TypeKind::unit && v.kind == Value::Kind::unit) {
      raw[i] = 0;
      ok = true;
    }
    if (!ok) {
      throw Error(Errc::value_out_of_domain, "index " + std::to_string(i) + ": value " +
                                                 v.to_string() + " outside domain of " +
                                                 type.to_string());
    }
  }
  return from_raw(std::move(type), std::move(raw));
}

double Column::real(std::size_t i) const {
  if (type_.is_float()) {
    if (type_.width() == 32) return std::bit_cast<float>(static_cast<std::uint32_t>(raw(i)));
    return std::bit_cast<double>(raw(i));
  }
  return static_cast<double>(integer(i));
}

Value Column::value(std::size_t i) const {
  require(i < length_, Errc::out_of_range,
          "index " + std::to_string(i) + " >= length " + std::to_string(length_));
  switch (type_.kind()) {
    case TypeKind::unit:
    case TypeKind::bottom: return Value::unit_value();
    case TypeKind::floating: return Value::of_real(real(i));
    case TypeKind::product: {
      std::vector<Value> items;
      for (const auto& comp : *components_) items.push_back(comp.value(i));
      return Value::of_tuple(std::move(items));
    }
    default: return Value::of_int(integer(i));
  }
}

const Column& Column::component(std::size_t k) const {
  require(components_ && k < components_->size(), Errc::out_of_range,
          "component " + std::to_string(k) + " of type " + type_.to_string());
  return (*components_)[k];
}

const std::vector<Column>& Column::components() const {
  static const std::vector<Column> none;
  return components_ ? *components_ : none;
}

std::vector<i128> Column::integers() const {
  require(type_.is_exact(), Errc::type_mismatch, "integers() on " + type_.to_string());
  std::vector<i128> out(length_);
  for (std::size_t i = 0; i < length_; ++i) out[i] = integer(i);
  return out;
}

std::vector<std::uint64_t> Column::raw_values() const {
  std::vector<std::uint64_t> out(length_);
  if (type_.is_product() || type_.kind() == TypeKind::unit) return out;
  for (std::size_t i = 0; i < length_; ++i) out[i] = raw(i);
  return out;
}

bool Column::operator==(const Column& other) const {
  if (type_ != other.type_ || length_ != other.length_) return false;
  if (type_.is_product()) return *components_ == *other.components_;
  if (words_ == other.words_) return true;
  return *words_ == *other.words_;
}

std::string Column::to_string(std::size_t max_items) const {
  std::string out = type_.to_string() + "[";
  for (std::size_t i = 0; i < length_ && i < max_items; ++i) {
    if (i) out += ",";
    out += value(i).to_string();
  }
  if (length_ > max_items) out += ",...";
  return out + "] (n=" + std::to_string(length_) + ")";
}

ColumnBuilder::ColumnBuilder(ElementType type, std::size_t reserve) : type_(std::move(type)) {
  require(!type_.is_product(), Errc::type_mismatch, "ColumnBuilder on product type");
  if (type_.is_bit()) {
    words_.reserve((reserve + 63) / 64);
  } else if (type_.kind() != TypeKind::unit && type_.kind() != TypeKind::bottom) {
    words_.reserve(reserve);
  }
}

void ColumnBuilder::push_raw(std::uint64_t word) {
  if (type_.is_bit()) {
    if ((length_ & 63) == 0) words_.push_back(0);
    words_.back() |= (word & 1u) << (length_ & 63);
  } else if (type_.kind() == TypeKind::bottom) {
    fail(Errc::value_out_of_domain, "bottom type admits no values");
  } else if (type_.kind() != TypeKind::unit) {
    words_.push_back(word);
  }
  ++length_;
}

void ColumnBuilder::push_int(i128 v) {
  if (!type_.is_exact() || !type_.contains(v)) {
    throw Error(Errc::value_out_of_domain, "index " + std::to_string(length_) + ": value " +
                                               int128_to_string(v) + " outside domain of " +
                                               type_.to_string());
  }
  push_raw(static_cast<std::uint64_t>(v));
}

void ColumnBuilder::push_real(double v) { push_raw(encode_real(type_, v)); }

void ColumnBuilder::push_from(const Column& src, std::size_t i) {
  if (type_.kind() == TypeKind::unit) {
    ++length_;
    return;
  }
  push_raw(src.raw(i));
}

Column ColumnBuilder::finish() {
  Column c;
  c.type_ = type_;
  c.length_ = length_;
  if (type_.kind() != TypeKind::unit && type_.kind() != TypeKind::bottom) {
    c.words_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(words_));
  }
  words_.clear();
  length_ = 0;
  return c;
}

Column take(const Column& src, const std::vector<std::size_t>& indices) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= src.size()) {
      throw Error(Errc::out_of_range, "index " + std::to_string(indices[k]) +
                                          " >= length " + std::to_string(src.size()));
    }
  }
  if (src.type().is_product()) {
    std::vector<Column> parts;
    for (const auto& comp : src.components()) parts.push_back(take(comp, indices));
    return Column::zip(std::move(parts));
  }
  ColumnBuilder b(src.type(), indices.size());
  for (auto idx : indices) b.push_from(src, idx);
  return b.finish();
}

Column slice(const Column& src, std::size_t begin, std::size_t end) {
  require(begin <= end && end <= src.size(), Errc::out_of_range, "slice bounds");
  std::vector<std::size_t> idx(end - begin);
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = begin + k;
  return take(src, idx);
}

Column empty_column(const ElementType& type) {
  if (type.is_product()) {
    std::vector<Column> parts;
    for (const auto& c : type.components()) parts.push_back(empty_column(c));
    return Column::zip(std::move(parts));
  }
  return ColumnBuilder(type).finish();
}

Column concat(const std::vector<Column>& parts) {
  require(!parts.empty(), Errc::invalid_argument, "concat of nothing");
  const auto& t = parts.front().type();
  std::size_t total = 0;
  for (const auto& p : parts) {
    require(p.type() == t, Errc::type_mismatch,
            "concatenate: " + p.type().to_string() + " vs " + t.to_string());
    total += p.size();
  }
  if (t.is_product()) {
    std::vector<Column> comps;
    for (std::size_t k = 0; k < t.components().size(); ++k) {
      std::vector<Column> slices;
      for (const auto& p : parts) slices.push_back(p.component(k));
      comps.push_back(concat(slices));
    }
    return Column::zip(std::move(comps));
  }
  ColumnBuilder b(t, total);
  for (const auto& p : parts) {
    for (std::size_t i = 0; i < p.size(); ++i) b.push_from(p, i);
  }
  return b.finish();
}

std::uint64_t FrequencyTable::count(const Value& v) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), v,
                             [](const auto& e, const Value& key) { return e.first < key; });
  return (it != entries.end() && it->first == v) ? it->second : 0;
}

FrequencyTable frequency_distribution(const Column& col) {
  FrequencyTable table;
  table.total = col.size();
  if (col.type().is_product()) {
    std::map<Value, std::uint64_t> counts;
    for (std::size_t i = 0; i < col.size(); ++i) ++counts[col.value(i)];
    table.entries.assign(counts.begin(), counts.end());
    return table;
  }
  std::unordered_map<std::uint64_t, std::uint64_t> counts;
  for (std::size_t i = 0; i < col.size(); ++i) ++counts[col.raw(i)];
  std::vector<std::pair<Value, std::uint64_t>> entries;
  entries.reserve(counts.size());
  for (const auto& [raw, n] : counts) {
    ColumnBuilder b(col.type(), 1);
    b.push_raw(raw);
    entries.emplace_back(b.finish().value(0), n);
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  table.entries = std::move(entries);
  return table;
}

std::size_t SegmentedViewSpec::segment_size(std::size_t j) const {
  require(j < segment_count(), Errc::out_of_range, "segment index out of range");
  return std::min(segment_length, column_length - j * segment_length);
}

Value segmented_get(const Column& col, const SegmentedViewSpec& spec, std::size_t i,
                    std::size_t j) {
  require(spec.segment_length > 0, Errc::invalid_argument, "segment length must be positive");
  require(spec.column_length == col.size(), Errc::length_mismatch,
          "view length differs from column length");
  require(i < spec.segment_length, Errc::out_of_range, "offset exceeds segment length");
  std::size_t idx = j * spec.segment_length + i;
  require(idx < col.size(), Errc::out_of_range,
          "index " + std::to_string(idx) + " >= length " + std::to_string(col.size()));
  return col.value(idx);
}

std::uint64_t column_size_bytes(const Column& col) {
  if (col.type().is_bit()) return (col.size() + 7) / 8;
  return static_cast<std::uint64_t>(col.type().byte_width()) * col.size();
}

std::uint64_t representation_size_bytes(const ColumnFamily& cols) {
  std::uint64_t total = 0;
  for (const auto& [label, col] : cols) total += column_size_bytes(col);
  return total;
}

}  // namespace colcirc
