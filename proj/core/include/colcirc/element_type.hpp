#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace colcirc {

enum class TypeKind : std::uint8_t {
  unsigned_int = 0,
  signed_int = 1,
  floating = 2,
  bit = 3,
  unit = 4,
  bottom = 5,
  product = 6,
};

inline constexpr int kMaxProductWidth = 512;

// Fixed-width element type carried by a column. Value-semantic and cheap to copy.
class ElementType {
 public:
  ElementType() : ElementType(TypeKind::unit, 0) {}

  static ElementType u(int width);
  static ElementType i(int width);
  static ElementType f(int width);
  static ElementType bit() { return ElementType(TypeKind::bit, 1); }
  static ElementType unit() { return ElementType(TypeKind::unit, 0); }
  static ElementType bottom() { return ElementType(TypeKind::bottom, 0); }
  static ElementType product(std::vector<ElementType> components);

  // Accepts "u8", "i16", "f64", "bit", "unit", "bottom", "(u8,i16)".
  static ElementType parse(std::string_view text);
  std::string to_string() const;

  TypeKind kind() const { return kind_; }
  int width() const { return width_; }
  const std::vector<ElementType>& components() const;

  bool is_unsigned() const { return kind_ == TypeKind::unsigned_int; }
  bool is_signed() const { return kind_ == TypeKind::signed_int; }
  bool is_integer() const { return is_unsigned() || is_signed(); }
  bool is_float() const { return kind_ == TypeKind::floating; }
  bool is_bit() const { return kind_ == TypeKind::bit; }
  bool is_product() const { return kind_ == TypeKind::product; }
  // Integer or bit: values fit an exact __int128 view.
  bool is_exact() const { return is_integer() || is_bit(); }
  bool is_numeric() const { return is_integer() || is_float(); }

  // Integer domain bounds, valid for integer and bit kinds.
  __int128 min_value() const;
  __int128 max_value() const;
  bool contains(__int128 v) const { return v >= min_value() && v <= max_value(); }

  // Storage bytes per element as used by size accounting (bit counted separately).
  int byte_width() const { return (width_ + 7) / 8; }

  bool operator==(const ElementType& other) const;
  bool operator!=(const ElementType& other) const { return !(*this == other); }

 private:
  ElementType(TypeKind kind, int width) : kind_(kind), width_(width) {}

  TypeKind kind_;
  int width_;
  std::shared_ptr<const std::vector<ElementType>> components_;
};

// Smallest unsigned type of width 8/16/32/64 holding max_value.
ElementType narrowest_unsigned(std::uint64_t max_value);
// Signed type one step wider than t (capped at 64 bits).
ElementType widened_signed(const ElementType& t);

}  // namespace colcirc
