#include "colcirc/column_io.hpp"

#include <fstream>
#include <sstream>

#include "colcirc/error.hpp"

namespace colcirc {

namespace {

constexpr char kMagic[] = "CCOL1";

void put_tag(std::string& out, const ElementType& t) {
  out.push_back(static_cast<char>(t.kind()));
  if (t.is_product()) {
    out.push_back(static_cast<char>(t.components().size()));
    for (const auto& c : t.components()) put_tag(out, c);
  } else {
    out.push_back(static_cast<char>(t.width()));
  }
}

void put_payload(std::string& out, const Column& col) {
  const auto& t = col.type();
  switch (t.kind()) {
    case TypeKind::unit:
    case TypeKind::bottom: return;
    case TypeKind::product:
      for (const auto& comp : col.components()) put_payload(out, comp);
      return;
    case TypeKind::bit: {
      std::size_t nbytes = (col.size() + 7) / 8;
      const auto& words = col.words();
      for (std::size_t b = 0; b < nbytes; ++b) {
        out.push_back(static_cast<char>((words[b / 8] >> (8 * (b % 8))) & 0xFF));
      }
      return;
    }
    default: {
      int bytes = t.byte_width();
      for (std::size_t i = 0; i < col.size(); ++i) {
        std::uint64_t w = col.raw(i);
        for (int b = 0; b < bytes; ++b) out.push_back(static_cast<char>((w >> (8 * b)) & 0xFF));
      }
    }
  }
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  std::uint8_t byte() {
    require(pos_ < bytes_.size(), Errc::parse_error, "truncated column file");
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint64_t le(int n) {
    std::uint64_t v = 0;
    for (int b = 0; b < n; ++b) v |= static_cast<std::uint64_t>(byte()) << (8 * b);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

ElementType get_tag(Reader& r) {
  auto kind = r.byte();
  auto width = r.byte();
  switch (kind) {
    case 0: return ElementType::u(width);
    case 1: return ElementType::i(width);
    case 2: return ElementType::f(width);
    case 3:
      require(width == 1, Errc::parse_error, "bit column with width byte != 1");
      return ElementType::bit();
    case 4: return ElementType::unit();
    case 5: return ElementType::bottom();
    case 6: {
      std::vector<ElementType> comps;
      for (int k = 0; k < width; ++k) comps.push_back(get_tag(r));
      return ElementType::product(std::move(comps));
    }
    default: fail(Errc::parse_error, "unknown element kind byte " + std::to_string(kind));
  }
}

Column get_payload(Reader& r, const ElementType& t, std::size_t n) {
  switch (t.kind()) {
    case TypeKind::unit: return Column::units(n);
    case TypeKind::bottom:
      require(n == 0, Errc::parse_error, "bottom column with nonzero length");
      return Column::from_raw(t, {});
    case TypeKind::product: {
      std::vector<Column> comps;
      for (const auto& c : t.components()) comps.push_back(get_payload(r, c, n));
      return Column::zip(std::move(comps));
    }
    case TypeKind::bit: {
      std::vector<std::uint64_t> words((n + 63) / 64, 0);
      std::size_t nbytes = (n + 7) / 8;
      for (std::size_t b = 0; b < nbytes; ++b) {
        words[b / 8] |= static_cast<std::uint64_t>(r.byte()) << (8 * (b % 8));
      }
      if (n % 64 != 0) {
        std::uint64_t mask = (std::uint64_t{1} << (n % 64)) - 1;
        require((words.back() & ~mask) == 0, Errc::parse_error, "nonzero bit padding");
      }
      return Column::from_packed_bits(std::move(words), n);
    }
    default: {
      int bytes = t.byte_width();
      std::vector<std::uint64_t> raw(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t w = r.le(bytes);
        if (t.is_signed() && t.width() < 64) {
          std::uint64_t sign = std::uint64_t{1} << (t.width() - 1);
          std::uint64_t mask = (std::uint64_t{1} << t.width()) - 1;
          std::uint64_t low = w & mask;
          int spare = bytes * 8 - t.width();
          std::uint64_t high = w >> t.width();
          std::uint64_t expect = (low & sign) ? ((std::uint64_t{1} << spare) - 1) : 0;
          require(high == expect, Errc::parse_error, "signed value with inconsistent high bits");
          std::uint64_t ext = (low & sign) ? (low | ~mask) : low;
          w = ext;
        }
        raw[i] = w;
      }
      return Column::from_raw(t, std::move(raw));
    }
  }
}

}  // namespace

std::string serialize_column(const Column& col) {
  std::string out(kMagic, 5);
  put_tag(out, col.type());
  std::uint64_t n = col.size();
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((n >> (8 * b)) & 0xFF));
  put_payload(out, col);
  return out;
}

Column parse_column(const std::string& bytes) {
  require(bytes.size() >= 5 && bytes.compare(0, 5, kMagic, 5) == 0, Errc::parse_error,
          "missing CCOL1 magic");
  std::string body = bytes.substr(5);
  Reader r(body);
  ElementType t = get_tag(r);
  std::uint64_t n = r.le(8);
  Column col;
  try {
    col = get_payload(r, t, n);
  } catch (const Error& e) {
    if (e.code() == Errc::value_out_of_domain) fail(Errc::parse_error, e.what());
    throw;
  }
  require(r.done(), Errc::parse_error, "trailing bytes after column payload");
  return col;
}

void write_column(const std::filesystem::path& path, const Column& col) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), Errc::io_error, "cannot open " + path.string() + " for writing");
  auto bytes = serialize_column(col);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  require(static_cast<bool>(out), Errc::io_error, "write failed: " + path.string());
}

Column read_column(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), Errc::io_error, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_column(buf.str());
}

}  // namespace colcirc
