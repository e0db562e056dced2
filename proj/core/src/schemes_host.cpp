#include <algorithm>
#include <map>
#include <numeric>

#include "colcirc/circuit_builder.hpp"
#include "colcirc/ops.hpp"
#include "colcirc/schemes.hpp"
#include "scheme_support.hpp"

namespace colcirc {

using detail::need;

Subcolumn Subcolumn::from(const ColumnFamily& f) {
  const Column& pos = need(f, "pos");
  const Column& data = need(f, "data");
  require(pos.type().is_integer(), Errc::type_mismatch, "subcolumn positions must be integers");
  require(pos.size() == data.size(), Errc::length_mismatch, "subcolumn pos and data lengths differ");
  return Subcolumn{pos, data};
}

Subcolumn canonical_subcolumn(const Subcolumn& sc) {
  std::vector<std::size_t> order(sc.pos.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sc.pos.integer(a) < sc.pos.integer(b);
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    require(sc.pos.integer(order[k]) >= 0, Errc::out_of_range, "negative subcolumn position");
    if (k > 0 && sc.pos.integer(order[k]) == sc.pos.integer(order[k - 1])) {
      fail(Errc::duplicate_position,
           "position " + int128_to_string(sc.pos.integer(order[k])) + " appears twice");
    }
  }
  return Subcolumn{take(sc.pos, order), take(sc.data, order)};
}

namespace {

// Merge of two canonical subcolumns; `on_clash` decides shared positions.
template <typename F>
Subcolumn merge(const Subcolumn& a0, const Subcolumn& b0, F on_clash) {
  require(a0.pos.type() == b0.pos.type() && a0.data.type() == b0.data.type(), Errc::type_mismatch,
          "subcolumns differ in type");
  Subcolumn a = canonical_subcolumn(a0), b = canonical_subcolumn(b0);
  std::size_t i = 0, j = 0;
  std::vector<std::pair<int, std::size_t>> picks;
  while (i < a.pos.size() || j < b.pos.size()) {
    if (j == b.pos.size() || (i < a.pos.size() && a.pos.integer(i) < b.pos.integer(j))) {
      picks.emplace_back(0, i++);
    } else if (i == a.pos.size() || b.pos.integer(j) < a.pos.integer(i)) {
      picks.emplace_back(1, j++);
    } else {
      int winner = on_clash(a, i, b, j);
      picks.emplace_back(winner, winner == 0 ? i : j);
      ++i, ++j;
    }
  }
  std::vector<Column> pos, data;
  for (auto [src, k] : picks) {
    const Subcolumn& s = src == 0 ? a : b;
    pos.push_back(slice(s.pos, k, k + 1));
    data.push_back(slice(s.data, k, k + 1));
  }
  if (picks.empty()) return Subcolumn{empty_column(a.pos.type()), empty_column(a.data.type())};
  return Subcolumn{concat(pos), concat(data)};
}

}  // namespace

Subcolumn subcolumn_overlay(const Subcolumn& base, const Subcolumn& top) {
  return merge(base, top, [](const Subcolumn&, std::size_t, const Subcolumn&, std::size_t) { return 1; });
}

Subcolumn subcolumn_union(const Subcolumn& a, const Subcolumn& b) {
  return merge(a, b, [](const Subcolumn& x, std::size_t i, const Subcolumn& y, std::size_t j) {
    if (!(x.data.value(i) == y.data.value(j))) {
      fail(Errc::incompatible_subcolumns,
           "subcolumns disagree at position " + int128_to_string(x.pos.integer(i)));
    }
    return 0;
  });
}

bool subcolumn_contained(const Subcolumn& a, const Subcolumn& b) {
  std::map<i128, Value> in_b;
  for (std::size_t j = 0; j < b.pos.size(); ++j) in_b.emplace(b.pos.integer(j), b.data.value(j));
  for (std::size_t i = 0; i < a.pos.size(); ++i) {
    auto it = in_b.find(a.pos.integer(i));
    if (it == in_b.end() || !(it->second == a.data.value(i))) return false;
  }
  return true;
}

std::vector<Column> partition_materialize(const Column& partition, std::uint64_t k,
                                          const ElementType& index_type) {
  require(partition.type().is_integer(), Errc::type_mismatch, "partition must hold integers");
  std::vector<std::vector<std::uint64_t>> parts(k);
  for (std::size_t i = 0; i < partition.size(); ++i) {
    i128 v = partition.integer(i);
    require(v >= 0 && v < static_cast<i128>(k), Errc::value_out_of_domain,
            "part id " + int128_to_string(v) + " at index " + std::to_string(i) + " outside 0.." +
                std::to_string(k - 1));
    parts[static_cast<std::size_t>(v)].push_back(i);
  }
  std::vector<Column> out;
  for (auto& p : parts) out.push_back(detail::index_column(index_type, p, "partition index"));
  return out;
}

Circuit partition_materialization_circuit(const ElementType& part_type, std::uint64_t k,
                                          const ElementType& index_type) {
  CircuitBuilder b;
  Wire part = b.input("partition", part_type);
  for (std::uint64_t j = 0; j < k; ++j) {
    Wire hit = b.ew_const("eq", part, j);
    b.output("pos" + std::to_string(j), b.select_indices(hit, index_type));
  }
  return b.build();
}

Column canonical_partition(const Column& partition) {
  std::map<i128, i128> relabel;
  ColumnBuilder out(partition.type(), partition.size());
  for (std::size_t i = 0; i < partition.size(); ++i) {
    auto [it, fresh] = relabel.emplace(partition.integer(i), static_cast<i128>(relabel.size()));
    out.push_int(it->second);
  }
  return out.finish();
}

Column varwidth_element(const ColumnFamily& vw, std::size_t i) {
  const Column& len = need(vw, "length");
  const Column& data = need(vw, "data");
  require(i < len.size(), Errc::out_of_range, "element index " + std::to_string(i) + " out of range");
  std::uint64_t start = 0;
  for (std::size_t j = 0; j < i; ++j) start += len.u64(j);
  require(start + len.u64(i) <= data.size(), Errc::out_of_range, "element overruns the data");
  return slice(data, start, start + len.u64(i));
}

ColumnFamily make_varwidth(const ElementType& type, const std::vector<Column>& elements,
                           const ElementType& length_type) {
  std::vector<std::uint64_t> lengths;
  for (const auto& e : elements) {
    require(e.type() == type, Errc::type_mismatch, "element type differs from " + type.to_string());
    lengths.push_back(e.size());
  }
  Column data = elements.empty() ? empty_column(type) : concat(elements);
  return {{"length", detail::index_column(length_type, lengths, "length")}, {"data", data}};
}

namespace {

bool mul_ok(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
bool add_ok(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }

}  // namespace

i128 eval_polynomial(const std::vector<i128>& coeffs, i128 x) {
  i128 acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    if (!mul_ok(acc, x, acc) || !add_ok(acc, *it, acc)) {
      fail(Errc::arithmetic_overflow, "polynomial evaluation overflows");
    }
  }
  return acc;
}

std::optional<std::vector<i128>> fit_integer_polynomial(const std::vector<i128>& y, int k) {
  require(k >= 1 && k <= 20, Errc::invalid_argument, "coefficient count must be in 1..20");
  std::vector<i128> coeffs(static_cast<std::size_t>(k), 0);
  int m = static_cast<int>(std::min<std::size_t>(y.size(), static_cast<std::size_t>(k)));
  if (m == 0) return coeffs;
  // Forward differences of the first m samples.
  std::vector<i128> diff(y.begin(), y.begin() + m), lead;
  for (int j = 0; j < m; ++j) {
    lead.push_back(diff[0]);
    for (int t = 0; t + 1 < static_cast<int>(diff.size()); ++t) {
      if (__builtin_sub_overflow(diff[t + 1], diff[t], &diff[t])) return std::nullopt;
    }
    diff.pop_back();
  }
  // falling[j] = monomial coefficients of x(x-1)...(x-j+1); C(x,j) = falling[j] / j!.
  std::vector<i128> fact(m, 1);
  for (int j = 1; j < m; ++j) fact[j] = fact[j - 1] * j;
  i128 denom = fact[m - 1];
  std::vector<i128> falling{1};
  std::vector<i128> scaled(m, 0);  // coefficients times denom
  for (int j = 0; j < m; ++j) {
    i128 w;
    if (!mul_ok(lead[j], denom / fact[j], w)) return std::nullopt;
    for (std::size_t t = 0; t < falling.size(); ++t) {
      i128 term;
      if (!mul_ok(w, falling[t], term) || !add_ok(scaled[t], term, scaled[t])) return std::nullopt;
    }
    std::vector<i128> next(falling.size() + 1, 0);
    for (std::size_t t = 0; t < falling.size(); ++t) {
      next[t + 1] += falling[t];
      i128 term;
      if (!mul_ok(falling[t], -static_cast<i128>(j), term) || !add_ok(next[t], term, next[t])) {
        return std::nullopt;
      }
    }
    falling = std::move(next);
  }
  for (int t = 0; t < m; ++t) {
    if (scaled[t] % denom != 0) return std::nullopt;
    coeffs[t] = scaled[t] / denom;
  }
  try {
    for (std::size_t x = 0; x < y.size(); ++x) {
      if (eval_polynomial(coeffs, static_cast<i128>(x)) != y[x]) return std::nullopt;
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return coeffs;
}

i128 rle_sum(const SchemeInstance& inst) {
  const Column& value = need(inst.columns, "value");
  const Column& length = need(inst.columns, "length");
  require(value.size() == length.size(), Errc::length_mismatch, "value and length differ in count");
  require(value.type().is_integer(), Errc::type_mismatch, "run values must be integers");
  i128 total = 0;
  for (std::size_t r = 0; r < value.size(); ++r) {
    i128 term;
    if (!mul_ok(value.integer(r), length.integer(r), term) || !add_ok(total, term, total)) {
      fail(Errc::arithmetic_overflow, "sum overflows");
    }
  }
  return total;
}

Column dict_select_eq(const SchemeInstance& inst, const Value& v) {
  require(inst.scheme_id == "dict.unique" || inst.scheme_id == "dict.monotone",
          Errc::invalid_argument, "selection needs a dict.unique or dict.monotone instance");
  const Column& dict = need(inst.columns, "dictionary");
  const Column& idx = need(inst.columns, "indices");
  std::optional<std::uint64_t> entry;
  if (inst.scheme_id == "dict.monotone") {
    std::size_t lo = 0, hi = dict.size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (dict.value(mid) < v) lo = mid + 1;
      else hi = mid;
    }
    if (lo < dict.size() && dict.value(lo) == v) entry = lo;
  } else {
    for (std::size_t j = 0; j < dict.size() && !entry; ++j) {
      if (dict.value(j) == v) entry = j;
    }
  }
  std::vector<bool> out(idx.size(), false);
  if (entry) {
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = idx.u64(i) == *entry;
  }
  return Column::from_bits(out);
}

std::uint64_t patch_count(const SchemeInstance& inst) {
  return need(inst.columns, "patch_pos").size();
}

}  // namespace colcirc
