#include "colcirc/element_type.hpp"

#include <charconv>

#include "colcirc/error.hpp"

namespace colcirc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

ElementType ElementType::u(int width) {
  require(width >= 1 && width <= 64, Errc::invalid_argument,
          "unsigned width must be in 1..64, got " + std::to_string(width));
  return ElementType(TypeKind::unsigned_int, width);
}

ElementType ElementType::i(int width) {
  require(width >= 1 && width <= 64, Errc::invalid_argument,
          "signed width must be in 1..64, got " + std::to_string(width));
  return ElementType(TypeKind::signed_int, width);
}

ElementType ElementType::f(int width) {
  require(width == 32 || width == 64, Errc::invalid_argument,
          "float width must be 32 or 64, got " + std::to_string(width));
  return ElementType(TypeKind::floating, width);
}

ElementType ElementType::product(std::vector<ElementType> components) {
  require(!components.empty(), Errc::invalid_argument, "product type needs components");
  int total = 0;
  for (const auto& c : components) total += c.width();
  require(total <= kMaxProductWidth, Errc::invalid_argument,
          "product width " + std::to_string(total) + " exceeds 512 bits");
  ElementType t(TypeKind::product, total);
  t.components_ = std::make_shared<const std::vector<ElementType>>(std::move(components));
  return t;
}

const std::vector<ElementType>& ElementType::components() const {
  static const std::vector<ElementType> none;
  return components_ ? *components_ : none;
}

ElementType ElementType::parse(std::string_view text) {
  text = trim(text);
  require(!text.empty(), Errc::parse_error, "empty type string");
  if (text == "bit" || text == "bool") return bit();
  if (text == "unit") return unit();
  if (text == "bottom") return bottom();
  if (text.front() == '(') {
    require(text.back() == ')', Errc::parse_error, "unbalanced product type: " + std::string(text));
    std::vector<ElementType> parts;
    int depth = 0;
    std::size_t start = 1;
    for (std::size_t k = 1; k + 1 < text.size(); ++k) {
      char ch = text[k];
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        parts.push_back(parse(text.substr(start, k - start)));
        start = k + 1;
      }
    }
    parts.push_back(parse(text.substr(start, text.size() - 1 - start)));
    return product(std::move(parts));
  }
  char head = text.front();
  int width = 0;
  auto digits = text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), width);
  require(ec == std::errc() && ptr == digits.data() + digits.size(), Errc::parse_error,
          "unknown element type: " + std::string(text));
  switch (head) {
    case 'u': return u(width);
    case 'i': return i(width);
    case 'f': return f(width);
    default: fail(Errc::parse_error, "unknown element type: " + std::string(text));
  }
}

std::string ElementType::to_string() const {
  switch (kind_) {
    case TypeKind::unsigned_int: return "u" + std::to_string(width_);
    case TypeKind::signed_int: return "i" + std::to_string(width_);
    case TypeKind::floating: return "f" + std::to_string(width_);
    case TypeKind::bit: return "bit";
    case TypeKind::unit: return "unit";
    case TypeKind::bottom: return "bottom";
    case TypeKind::product: {
      std::string out = "(";
      for (std::size_t k = 0; k < components().size(); ++k) {
        if (k) out += ",";
        out += components()[k].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

__int128 ElementType::min_value() const {
  switch (kind_) {
    case TypeKind::signed_int: return -(static_cast<__int128>(1) << (width_ - 1));
    case TypeKind::unsigned_int:
    case TypeKind::bit: return 0;
    default: fail(Errc::type_mismatch, "type " + to_string() + " has no integer domain");
  }
}

__int128 ElementType::max_value() const {
  switch (kind_) {
    case TypeKind::signed_int: return (static_cast<__int128>(1) << (width_ - 1)) - 1;
    case TypeKind::unsigned_int: return (static_cast<__int128>(1) << width_) - 1;
    case TypeKind::bit: return 1;
    default: fail(Errc::type_mismatch, "type " + to_string() + " has no integer domain");
  }
}

bool ElementType::operator==(const ElementType& other) const {
  if (kind_ != other.kind_ || width_ != other.width_) return false;
  if (kind_ != TypeKind::product) return true;
  return components() == other.components();
}

ElementType narrowest_unsigned(std::uint64_t max_value) {
  if (max_value <= 0xFFu) return ElementType::u(8);
  if (max_value <= 0xFFFFu) return ElementType::u(16);
  if (max_value <= 0xFFFFFFFFu) return ElementType::u(32);
  return ElementType::u(64);
}

ElementType widened_signed(const ElementType& t) {
  require(t.is_exact(), Errc::type_mismatch, "cannot widen " + t.to_string());
  int w = t.is_bit() ? 1 : t.width();
  int next = 8;
  while (next <= w && next < 64) next *= 2;
  return ElementType::i(next);
}

}  // namespace colcirc
