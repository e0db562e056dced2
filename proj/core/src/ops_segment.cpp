#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"

namespace colcirc::ops {

namespace {

void require_divides(std::uint64_t segment_length, std::size_t n, const char* what) {
  require(segment_length > 0, Errc::invalid_argument,
          std::string(what) + ": segment length must be positive");
  if (n % segment_length != 0) {
    throw Error(Errc::slack_segment_present,
                std::string(what) + ": segment length " + std::to_string(segment_length) +
                    " does not divide " + std::to_string(n));
  }
}

}  // namespace

std::pair<Column, std::uint64_t> transpose(std::uint64_t l, const Column& col) {
  require_divides(l, col.size(), "transpose");
  std::size_t n = col.size();
  std::size_t m = n / l;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < m; ++j) idx[i * m + j] = j * l + i;
  }
  return {take(col, idx), m};
}

std::pair<Column, std::uint64_t> replicate_segments(const Column& col, std::uint64_t l,
                                                    std::uint64_t factor) {
  require_divides(l, col.size(), "replicate_segments");
  std::vector<std::size_t> idx;
  idx.reserve(col.size() * factor);
  for (std::size_t s = 0; s < col.size() / l; ++s) {
    for (std::uint64_t r = 0; r < factor; ++r) {
      for (std::size_t i = 0; i < l; ++i) idx.push_back(s * l + i);
    }
  }
  return {take(col, idx), l};
}

std::pair<Column, std::uint64_t> replicate_within_segments(const Column& col, std::uint64_t l,
                                                           std::uint64_t factor) {
  require_divides(l, col.size(), "replicate_within_segments");
  std::vector<std::size_t> idx;
  idx.reserve(col.size() * factor);
  for (std::size_t i = 0; i < col.size(); ++i) {
    for (std::uint64_t r = 0; r < factor; ++r) idx.push_back(i);
  }
  return {take(col, idx), l * factor};
}

Column compose_segments(std::uint64_t l, const Column& col) {
  require(l > 0, Errc::divisibility, "compose_segments: segment length must be positive");
  if (col.size() % l != 0 || col.size() == 0) {
    throw Error(Errc::divisibility, "compose_segments: segment length " + std::to_string(l) +
                                        " does not divide " + std::to_string(col.size()));
  }
  std::size_t k = col.size() / l;
  std::vector<Column> parts;
  for (std::size_t s = 0; s < k; ++s) parts.push_back(slice(col, s * l, (s + 1) * l));
  return Column::zip(std::move(parts));
}

Column assemble(std::uint64_t k, const Column& col) {
  require(k > 0, Errc::divisibility, "assemble: k must be positive");
  if (col.size() % k != 0) {
    throw Error(Errc::divisibility, "assemble: " + std::to_string(k) + " does not divide " +
                                        std::to_string(col.size()));
  }
  std::size_t rows = col.size() / k;
  std::vector<Column> parts;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::size_t> idx(rows);
    for (std::size_t i = 0; i < rows; ++i) idx[i] = k * i + j;
    parts.push_back(take(col, idx));
  }
  return Column::zip(std::move(parts));
}

}  // namespace colcirc::ops
