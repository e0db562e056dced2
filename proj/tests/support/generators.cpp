#include "generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "colcirc/error.hpp"
#include "colcirc/schemes.hpp"

namespace colcirc::testing {

std::int64_t draw(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

Column random_ints(Rng& rng, const ElementType& t, std::size_t n, std::int64_t lo, std::int64_t hi) {
  lo = static_cast<std::int64_t>(std::max<i128>(lo, t.min_value()));
  hi = static_cast<std::int64_t>(std::min<i128>(hi, t.max_value()));
  std::vector<i128> v(n);
  for (auto& x : v) x = draw(rng, lo, hi);
  return Column::from_ints(t, v);
}

Column random_bits(Rng& rng, std::size_t n, double p_one) {
  std::bernoulli_distribution coin(p_one);
  std::vector<bool> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = coin(rng);
  return Column::from_bits(v);
}

std::vector<std::uint64_t> random_subset(Rng& rng, std::uint64_t domain, std::size_t m) {
  m = std::min<std::uint64_t>(m, domain);
  std::set<std::uint64_t> picked;
  if (m * 2 > domain) {
    std::vector<std::uint64_t> all(domain);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(m);
    return all;
  }
  std::vector<std::uint64_t> out;
  while (out.size() < m) {
    auto x = static_cast<std::uint64_t>(draw(rng, 0, static_cast<std::int64_t>(domain - 1)));
    if (picked.insert(x).second) out.push_back(x);
  }
  return out;
}

namespace {

const ElementType kU32 = ElementType::u(32);
const ElementType kI64 = ElementType::i(64);

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(v.size()) - 1))];
}

ElementType any_int_type(Rng& rng) {
  static const std::vector<ElementType> types = {ElementType::u(8),  ElementType::u(16), ElementType::u(32),
                                                 ElementType::u(64), ElementType::i(8),  ElementType::i(16),
                                                 ElementType::i(32), ElementType::i(64)};
  return pick(rng, types);
}

std::size_t any_length(Rng& rng, std::size_t hi = 48) {
  // Empty and single-element columns show up often enough to matter.
  auto r = draw(rng, 0, 9);
  if (r == 0) return 0;
  if (r == 1) return 1;
  return static_cast<std::size_t>(draw(rng, 2, static_cast<std::int64_t>(hi)));
}

// Values spread over the type's domain, or clustered in a few values.
Column any_ints(Rng& rng, const ElementType& t, std::size_t n) {
  switch (draw(rng, 0, 2)) {
    case 0:
      return random_ints(rng, t, n, -1000000, 1000000);
    case 1: {
      Column pool = random_ints(rng, t, static_cast<std::size_t>(draw(rng, 1, 5)), -100, 100);
      std::vector<std::size_t> idx(n);
      for (auto& i : idx) i = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(pool.size()) - 1));
      return take(pool, idx);
    }
    default:
      return random_ints(rng, t, n, static_cast<std::int64_t>(std::max<i128>(t.min_value(), INT64_MIN / 4)),
                         static_cast<std::int64_t>(std::min<i128>(t.max_value(), INT64_MAX / 4)));
  }
}

Column index_col(const ElementType& t, const std::vector<std::uint64_t>& v) { return Column::from_u64(t, v); }

// Run-structured column: values repeated over runs of 1..max_run.
Column run_column(Rng& rng, const ElementType& t, std::size_t n, int max_run) {
  std::vector<i128> v;
  while (v.size() < n) {
    i128 x = random_ints(rng, t, 1, -50, 50).integer(0);
    auto len = static_cast<std::size_t>(draw(rng, 1, max_run));
    for (std::size_t k = 0; k < len && v.size() < n; ++k) v.push_back(x);
  }
  return Column::from_ints(t, v);
}

ColumnFamily subcolumn_input(Rng& rng) {
  ElementType pt = pick(rng, std::vector<ElementType>{kU32, ElementType::u(64), ElementType::u(16)});
  auto m = any_length(rng, 30);
  auto pos = random_subset(rng, 200, m);
  ElementType dt = any_int_type(rng);
  return {{"pos", index_col(pt, pos)}, {"data", any_ints(rng, dt, pos.size())}};
}

Column segment_ids(Rng& rng, std::size_t n, const ElementType& t) {
  std::vector<i128> ids;
  i128 seg = 0;
  while (ids.size() < n) {
    auto len = static_cast<std::size_t>(draw(rng, 1, 6));
    for (std::size_t k = 0; k < len && ids.size() < n; ++k) ids.push_back(seg);
    ++seg;
  }
  return Column::from_ints(t, ids);
}

Column uniform_segment_ids(std::size_t n, std::size_t l, const ElementType& t) {
  std::vector<i128> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<i128>(i / l);
  return Column::from_ints(t, ids);
}

ColumnFamily index_set_input(const ElementType& t, std::uint64_t domain,
                             const std::vector<std::uint64_t>& elements) {
  return {{"full_length", Column::from_u64(t, {domain})}, {"elements", index_col(t, elements)}};
}

ColumnFamily varwidth_input(Rng& rng, int max_len, bool repeat) {
  auto n = any_length(rng, 20);
  ElementType dt = any_int_type(rng);
  std::vector<Column> pool;
  for (int k = 0; k < 4; ++k) {
    pool.push_back(any_ints(rng, dt, static_cast<std::size_t>(draw(rng, 0, max_len))));
  }
  std::vector<std::uint64_t> lens;
  std::vector<Column> parts;
  for (std::size_t i = 0; i < n; ++i) {
    Column e = repeat ? pick(rng, pool) : any_ints(rng, dt, static_cast<std::size_t>(draw(rng, 0, max_len)));
    lens.push_back(e.size());
    parts.push_back(e);
  }
  return {{"length", index_col(kU32, lens)}, {"data", parts.empty() ? empty_column(dt) : concat(parts)}};
}

Column product_column(Rng& rng, std::size_t n, const std::vector<ElementType>& types) {
  std::vector<Column> comps;
  for (const auto& t : types) comps.push_back(any_ints(rng, t, n));
  return Column::zip(comps);
}

std::vector<i128> poly_values(const std::vector<i128>& c, std::size_t n) {
  std::vector<i128> y(n);
  for (std::size_t x = 0; x < n; ++x) y[x] = eval_polynomial(c, static_cast<i128>(x));
  return y;
}

ColumnFamily column_only(const Column& c) { return {{kColumnLabel, c}}; }

using CaseFn = std::function<void(SchemeCase&, Rng&)>;

const std::map<std::string, CaseFn>& case_builders() {
  static const std::map<std::string, CaseFn> builders = [] {
    std::map<std::string, CaseFn> m;
    auto plain = [](SchemeCase& c, Rng& rng) {
      c.input = column_only(any_ints(rng, any_int_type(rng), any_length(rng)));
    };
    for (const char* id : {"indexed", "nullsup", "dict", "dict.unique", "dict.monotone", "column.complementing",
                           "spline.generalized", "spline.knotted", "for", "delta.naive", "delta", "delta.patched"}) {
      m[id] = plain;
    }
    m["indexed"] = [](SchemeCase& c, Rng& rng) {
      auto n = any_length(rng);
      Column col = draw(rng, 0, 3) == 0 ? product_column(rng, n, {ElementType::u(8), kI64})
                                        : any_ints(rng, any_int_type(rng), n);
      c.input = column_only(col);
      if (draw(rng, 0, 1)) c.params["pos_type"] = "u64";
    };
    m["column.complementing"] = [](SchemeCase& c, Rng& rng) {
      auto n = any_length(rng);
      Column col = any_ints(rng, any_int_type(rng), n);
      c.input = column_only(col);
      if (draw(rng, 0, 1)) c.input["selection"] = random_bits(rng, n, 0.3);
    };
    m["column.overlaid"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = pick(rng, std::vector<ElementType>{ElementType::u(32), ElementType::i(32), kI64});
      auto n = any_length(rng);
      std::vector<i128> v(n);
      for (auto& x : v) x = draw(rng, 0, 9) == 0 ? draw(rng, -100000, 100000) : draw(rng, 0, 200);
      if (t.is_unsigned()) {
        for (auto& x : v) x = x < 0 ? -x : x;
      }
      c.input = column_only(Column::from_ints(t, v));
      if (draw(rng, 0, 1)) c.params["data_type"] = "u8";
    };
    for (const char* id : {"spline.generalized", "spline.knotted"}) {
      m[id] = [](SchemeCase& c, Rng& rng) {
        ElementType t = pick(rng, std::vector<ElementType>{ElementType::i(32), kI64, ElementType::u(16)});
        auto n = any_length(rng);
        if (std::string(c.scheme_id) == "spline.knotted") n = std::max<std::size_t>(n, 1);
        std::vector<i128> v;
        while (v.size() < n) {
          std::vector<i128> coeffs = {draw(rng, 0, 500), draw(rng, -3, 3), draw(rng, 0, 1)};
          auto len = static_cast<std::size_t>(draw(rng, 1, 12));
          for (std::size_t x = 0; x < len && v.size() < n; ++x) {
            i128 y = eval_polynomial(coeffs, static_cast<i128>(x));
            v.push_back(t.contains(y) ? y : 0);
          }
        }
        c.input = column_only(Column::from_ints(t, v));
        c.params["degree"] = draw(rng, 0, 2);
      };
    }
    m["spline.equiknotted"] = [](SchemeCase& c, Rng& rng) {
      auto l = draw(rng, 1, 10);
      auto n = any_length(rng);
      std::vector<i128> v;
      while (v.size() < n) {
        i128 a = draw(rng, -1000, 1000), b = draw(rng, -20, 20);
        for (std::int64_t x = 0; x < l && v.size() < n; ++x) v.push_back(a + b * x);
      }
      c.input = column_only(Column::from_ints(kI64, v));
      c.params = {{"interval_length", l}, {"degree", 1}};
    };
    m["for"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = any_int_type(rng);
      c.input = column_only(any_ints(rng, t, any_length(rng)));
      c.params["segment_length"] = draw(rng, 1, 16);
    };
    auto walk = [](Rng& rng, const ElementType& t, std::size_t n) {
      std::vector<i128> v;
      i128 x = t.is_signed() ? 0 : 1000;
      for (std::size_t i = 0; i < n; ++i) {
        x += draw(rng, 0, 9) == 0 ? draw(rng, -900, 900) : draw(rng, -5, 5);
        x = std::clamp<i128>(x, std::max<i128>(t.min_value(), -100000), std::min<i128>(t.max_value(), 100000));
        v.push_back(x);
      }
      return Column::from_ints(t, v);
    };
    m["delta.naive"] = [walk](SchemeCase& c, Rng& rng) {
      c.input = column_only(walk(rng, any_int_type(rng), any_length(rng)));
    };
    for (const char* id : {"delta", "delta.patched"}) {
      m[id] = [walk](SchemeCase& c, Rng& rng) {
        c.input = column_only(walk(rng, any_int_type(rng), any_length(rng)));
        c.params["segment_length"] = draw(rng, 1, 16);
      };
    }
    m["subcolumn.std"] = [](SchemeCase& c, Rng& rng) { c.input = subcolumn_input(rng); };
    m["subcolumn.overlay"] = m["subcolumn.std"];
    m["subcolumn.union.disjoint"] = m["subcolumn.std"];
    m["subcolumn.segmented"] = [](SchemeCase& c, Rng& rng) {
      auto l = static_cast<std::uint64_t>(draw(rng, 1, 5));
      auto segs = random_subset(rng, 20, static_cast<std::size_t>(draw(rng, 0, 8)));
      std::vector<std::uint64_t> pos;
      for (auto s : segs) {
        for (std::uint64_t k = 0; k < l; ++k) pos.push_back(s * l + k);
      }
      std::shuffle(pos.begin(), pos.end(), rng);
      c.input = {{"pos", index_col(kU32, pos)}, {"data", any_ints(rng, any_int_type(rng), pos.size())}};
      c.params["segment_length"] = l;
    };
    m["segmentation"] = [](SchemeCase& c, Rng& rng) {
      c.input = {{"segment_of", segment_ids(rng, any_length(rng), kU32)}};
    };
    m["segmentation.uniform"] = [](SchemeCase& c, Rng& rng) {
      auto l = static_cast<std::size_t>(draw(rng, 1, 7));
      c.input = {{"segment_of", uniform_segment_ids(any_length(rng), l, kU32)}};
    };
    m["segmented"] = [](SchemeCase& c, Rng& rng) {
      auto n = any_length(rng);
      c.input = {{kColumnLabel, any_ints(rng, any_int_type(rng), n)}, {"segment_of", segment_ids(rng, n, kU32)}};
    };
    m["segmented.uniform"] = [](SchemeCase& c, Rng& rng) {
      auto n = any_length(rng);
      auto l = static_cast<std::size_t>(draw(rng, 1, 7));
      c.input = {{kColumnLabel, any_ints(rng, any_int_type(rng), n)},
                 {"segment_of", uniform_segment_ids(n, l, kU32)}};
    };
    auto sparse = [](SchemeCase& c, Rng& rng) {
      ElementType t = pick(rng, std::vector<ElementType>{kU32, ElementType::u(16), ElementType::u(64)});
      auto domain = static_cast<std::uint64_t>(draw(rng, 0, 100));
      auto el = random_subset(rng, domain, any_length(rng, 60));
      c.input = index_set_input(t, domain, el);
    };
    m["indexset.sparse"] = sparse;
    m["indexset.dense"] = sparse;
    m["indexset.contiguous"] = [](SchemeCase& c, Rng& rng) {
      auto domain = static_cast<std::uint64_t>(draw(rng, 0, 100));
      auto start = static_cast<std::uint64_t>(draw(rng, 0, static_cast<std::int64_t>(domain)));
      auto len = static_cast<std::uint64_t>(draw(rng, 0, static_cast<std::int64_t>(domain - start)));
      std::vector<std::uint64_t> el(len);
      std::iota(el.begin(), el.end(), start);
      std::shuffle(el.begin(), el.end(), rng);
      c.input = index_set_input(kU32, domain, el);
    };
    m["partition"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = pick(rng, std::vector<ElementType>{kU32, ElementType::u(8), ElementType::i(16)});
      c.input = {{"partition", random_ints(rng, t, any_length(rng), 0, draw(rng, 0, 5))}};
    };
    m["partition.k"] = [](SchemeCase& c, Rng& rng) {
      auto k = draw(rng, 1, 4);
      auto n = any_length(rng);
      c.input = {{kColumnLabel, any_ints(rng, any_int_type(rng), n)},
                 {"partition", random_ints(rng, ElementType::u(8), n, 0, k - 1)}};
      c.params["k"] = k;
    };
    m["components"] = [](SchemeCase& c, Rng& rng) {
      std::vector<ElementType> types;
      for (auto k = draw(rng, 1, 3); k > 0; --k) types.push_back(any_int_type(rng));
      c.input = column_only(product_column(rng, any_length(rng), types));
    };
    auto same_typed = [](SchemeCase& c, Rng& rng) {
      ElementType t = any_int_type(rng);
      c.input = column_only(product_column(rng, any_length(rng), std::vector<ElementType>(draw(rng, 1, 3), t)));
    };
    m["components.concatenated"] = same_typed;
    m["components.shattered"] = same_typed;
    m["value.indicators"] = [](SchemeCase& c, Rng& rng) {
      c.input = column_only(random_ints(rng, kU32, any_length(rng, 30), 0, draw(rng, 0, 5)));
    };
    m["varwidth.std"] = [](SchemeCase& c, Rng& rng) { c.input = varwidth_input(rng, 5, false); };
    m["varwidth.capped"] = [](SchemeCase& c, Rng& rng) {
      c.input = varwidth_input(rng, 5, false);
      if (draw(rng, 0, 1)) c.params["max_length"] = draw(rng, 5, 7);
    };
    for (const char* id : {"vwdict", "vwdict.unique", "vwdict.monotone"}) {
      m[id] = [](SchemeCase& c, Rng& rng) { c.input = varwidth_input(rng, 4, true); };
    }
    m["pvw"] = [](SchemeCase& c, Rng& rng) {
      auto period = draw(rng, 1, 4);
      auto n = any_length(rng, 30);
      ElementType dt = any_int_type(rng);
      std::vector<std::uint64_t> lens;
      std::uint64_t w = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i % static_cast<std::size_t>(period) == 0) w = static_cast<std::uint64_t>(draw(rng, 0, 4));
        lens.push_back(w);
      }
      std::uint64_t total = std::accumulate(lens.begin(), lens.end(), std::uint64_t{0});
      c.input = {{"length", index_col(kU32, lens)}, {"data", any_ints(rng, dt, total)}};
      c.params["period"] = period;
    };
    m["nullable.complementing"] = [](SchemeCase& c, Rng& rng) {
      auto n = any_length(rng);
      c.input = {{"valid", random_bits(rng, n, 0.7)}, {"data", any_ints(rng, any_int_type(rng), n)}};
    };
    m["nullable.patched"] = m["nullable.complementing"];
    m["constant"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = any_int_type(rng);
      Column v = any_ints(rng, t, 1);
      c.input = column_only(take(v, std::vector<std::size_t>(any_length(rng), 0)));
      if (c.input.at(kColumnLabel).empty()) c.input = column_only(empty_column(t));
    };
    m["generated"] = [](SchemeCase& c, Rng& rng) {
      static const std::vector<std::string> all = {"pow:0", "pow:1", "pow:2", "mod:3", "div:4"};
      std::vector<std::string> basis;
      for (const auto& b : all) {
        if (draw(rng, 0, 1)) basis.push_back(b);
      }
      if (basis.empty()) basis.push_back("pow:0");
      auto n = static_cast<std::size_t>(draw(rng, 12, 48));
      std::vector<i128> y(n, 0);
      for (const auto& b : basis) {
        i128 coef = draw(rng, -20, 20);
        int arg = b[b.size() - 1] - '0';
        for (std::size_t x = 0; x < n; ++x) {
          i128 bx = b.rfind("pow", 0) == 0 ? (arg == 0 ? 1 : arg == 1 ? x : x * x)
                    : b.rfind("mod", 0) == 0 ? static_cast<i128>(x % arg)
                                             : static_cast<i128>(x / arg);
          y[x] += coef * bx;
        }
      }
      c.input = column_only(Column::from_ints(kI64, y));
      c.params["basis"] = basis;
    };
    m["generated.poly"] = [](SchemeCase& c, Rng& rng) {
      auto d = draw(rng, 0, 3);
      std::vector<i128> coeffs;
      for (std::int64_t j = 0; j <= d; ++j) coeffs.push_back(draw(rng, -9, 9));
      c.input = column_only(Column::from_ints(kI64, poly_values(coeffs, any_length(rng))));
      c.params["degree"] = d;
    };
    m["run.full"] = [](SchemeCase& c, Rng& rng) {
      c.input = column_only(run_column(rng, any_int_type(rng), any_length(rng), 6));
    };
    m["run.rle"] = m["run.full"];
    m["run.rpe"] = m["run.full"];
    m["run.rle.capped"] = [](SchemeCase& c, Rng& rng) {
      c.input = column_only(run_column(rng, any_int_type(rng), any_length(rng), 9));
      c.params["r"] = draw(rng, 1, 4);
    };
    m["cascade"] = [](SchemeCase& c, Rng& rng) {
      std::vector<int> bits;
      for (auto k = draw(rng, 1, 3); k > 0; --k) bits.push_back(static_cast<int>(draw(rng, 1, 3)));
      std::size_t room = 0;
      for (int b : bits) room += (std::size_t{1} << b) - 1;
      ElementType t = any_int_type(rng);
      Column pool = random_ints(rng, t, static_cast<std::size_t>(draw(rng, 1, static_cast<std::int64_t>(room))), -500, 500);
      std::vector<std::size_t> idx(any_length(rng));
      for (auto& i : idx) i = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(pool.size()) - 1));
      c.input = column_only(take(pool, idx));
      c.params["bits"] = bits;
    };
    auto prefix_set = [](SchemeCase& c, Rng& rng, int w, int p) {
      std::uint64_t domain = std::uint64_t{1} << w;
      auto el = random_subset(rng, domain, any_length(rng, 200));
      std::uint64_t cap = (std::uint64_t{1} << (w - p)) - 1;
      std::map<std::uint64_t, std::uint64_t> per_block;
      std::vector<std::uint64_t> kept;
      for (auto x : el) {
        if (++per_block[x >> (w - p)] <= cap) kept.push_back(x);
      }
      c.input = index_set_input(kU32, domain, kept);
    };
    m["idx.common_prefix"] = [prefix_set](SchemeCase& c, Rng& rng) {
      int w = static_cast<int>(pick(rng, std::vector<std::int64_t>{6, 8, 10}));
      int p = static_cast<int>(draw(rng, 1, w - 1));
      prefix_set(c, rng, w, p);
      c.params = {{"w", w}, {"p", p}};
    };
    m["idx.common_upper_half"] = [prefix_set](SchemeCase& c, Rng& rng) {
      int w = static_cast<int>(pick(rng, std::vector<std::int64_t>{6, 8, 10}));
      prefix_set(c, rng, w, w / 2);
      c.params = {{"w", w}};
    };
    auto segdict = [](SchemeCase& c, Rng& rng) {
      ElementType t = any_int_type(rng);
      auto n = any_length(rng);
      Column pool = random_ints(rng, t, static_cast<std::size_t>(draw(rng, 1, 9)), -1000, 1000);
      std::vector<std::size_t> idx(n);
      for (auto& i : idx) i = static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(pool.size()) - 1));
      c.input = column_only(take(pool, idx));
      c.params["segment_length"] = draw(rng, 1, 8);
    };
    m["segdict"] = segdict;
    m["segdict.two_level"] = segdict;
    m["noisy.generated"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = pick(rng, std::vector<ElementType>{ElementType::i(32), kI64, ElementType::u(32)});
      auto n = any_length(rng);
      std::vector<i128> v(n);
      i128 a = draw(rng, 1000, 5000), b = draw(rng, -10, 10), noise = draw(rng, 0, 40);
      for (std::size_t x = 0; x < n; ++x) v[x] = a + b * static_cast<i128>(x) + draw(rng, -noise, noise);
      c.input = column_only(Column::from_ints(t, v));
    };
    m["subdict"] = [](SchemeCase& c, Rng& rng) {
      ElementType t = pick(rng, std::vector<ElementType>{kU32, kI64, ElementType::u(16)});
      auto n = any_length(rng);
      Column pool = random_ints(rng, t, static_cast<std::size_t>(draw(rng, 1, 4)), 0, 60000);
      std::vector<i128> v(n);
      for (auto& x : v) {
        x = draw(rng, 0, 7) == 0 ? random_ints(rng, t, 1, 0, 60000).integer(0)
                                 : pool.integer(static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(pool.size()) - 1)));
      }
      c.input = column_only(Column::from_ints(t, v));
    };
    return m;
  }();
  return builders;
}

}  // namespace

SchemeCase random_case(const std::string& scheme_id, Rng& rng) {
  const auto& builders = case_builders();
  auto it = builders.find(scheme_id);
  require(it != builders.end(), Errc::unknown_scheme, "no random case generator for " + scheme_id);
  SchemeCase c;
  c.scheme_id = scheme_id;
  it->second(c, rng);
  return c;
}

// ---------------------------------------------------------------- corruption

namespace {

using Mutation = std::function<bool(ColumnFamily&, const json&, Rng&)>;

std::size_t any_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(draw(rng, 0, static_cast<std::int64_t>(n) - 1));
}

bool set_element(ColumnFamily& f, const std::string& label, std::size_t i, i128 v) {
  const Column& c = f.at(label);
  if (i >= c.size() || !c.type().is_exact() || !c.type().contains(v)) return false;
  auto ints = c.integers();
  ints[i] = v;
  f[label] = Column::from_ints(c.type(), ints);
  return true;
}

// Element i := element j for some i != j.
bool duplicate(ColumnFamily& f, const std::string& label, Rng& rng) {
  const Column& c = f.at(label);
  if (c.size() < 2) return false;
  std::size_t i = any_index(rng, c.size()), j = any_index(rng, c.size() - 1);
  if (j >= i) ++j;
  return set_element(f, label, i, c.integer(j));
}

bool set_out_of_range(ColumnFamily& f, const std::string& label, std::uint64_t bound, Rng& rng) {
  const Column& c = f.at(label);
  if (c.empty()) return false;
  return set_element(f, label, any_index(rng, c.size()), static_cast<i128>(bound));
}

bool drop_last(ColumnFamily& f, const std::string& label) {
  const Column& c = f.at(label);
  if (c.empty()) return false;
  f[label] = slice(c, 0, c.size() - 1);
  return true;
}

bool append_copy(ColumnFamily& f, const std::string& label) {
  const Column& c = f.at(label);
  if (c.empty()) return false;
  f[label] = concat({c, slice(c, 0, 1)});
  return true;
}

bool set_scalar(ColumnFamily& f, const std::string& label, i128 v) { return set_element(f, label, 0, v); }

bool add_to(ColumnFamily& f, const std::string& label, std::size_t i, i128 delta) {
  const Column& c = f.at(label);
  if (i >= c.size()) return false;
  return set_element(f, label, i, c.integer(i) + delta);
}

std::uint64_t scalar(const ColumnFamily& f, const std::string& label) { return f.at(label).u64(0); }

struct Rule {
  std::string what;
  Mutation apply;
};

Rule dup_rule(const std::string& label) {
  return {"repeated element in " + label,
          [label](ColumnFamily& f, const json&, Rng& rng) { return duplicate(f, label, rng); }};
}
Rule shrink_rule(const std::string& label) {
  return {"length mismatch in " + label,
          [label](ColumnFamily& f, const json&, Rng&) { return drop_last(f, label); }};
}
Rule grow_rule(const std::string& label) {
  return {"extra element in " + label,
          [label](ColumnFamily& f, const json&, Rng&) { return append_copy(f, label); }};
}
Rule zero_rule(const std::string& label) {
  return {label + " set to zero", [label](ColumnFamily& f, const json&, Rng&) { return set_scalar(f, label, 0); }};
}
Rule beyond_rule(const std::string& label, std::function<std::uint64_t(const ColumnFamily&, const json&)> bound) {
  return {label + " out of range", [label, bound](ColumnFamily& f, const json& p, Rng& rng) {
            return set_out_of_range(f, label, bound(f, p), rng);
          }};
}
Rule shift_first_rule(const std::string& label) {
  return {label + " leaves a gap", [label](ColumnFamily& f, const json&, Rng&) { return add_to(f, label, 0, 1); }};
}
std::uint64_t size_of(const ColumnFamily& f, const std::string& label) { return f.at(label).size(); }

ElementType decoded_type(const json& p) { return ElementType::parse(p.at("type").get<std::string>()); }

const std::map<std::string, std::vector<Rule>>& corruption_rules() {
  static const std::map<std::string, std::vector<Rule>> rules = [] {
    std::map<std::string, std::vector<Rule>> m;
    auto len_of = [](const std::string& label) {
      return [label](const ColumnFamily& f, const json&) { return size_of(f, label); };
    };
    m["indexed"] = {dup_rule("pos"), shrink_rule("data"), beyond_rule("pos", len_of("data"))};
    m["subcolumn.std"] = {dup_rule("unordered_pos"), shrink_rule("unordered_data")};
    m["subcolumn.overlay"] = {dup_rule("pos1"), dup_rule("pos2"), shrink_rule("data1"), shrink_rule("data2")};
    m["subcolumn.union.disjoint"] = m["subcolumn.overlay"];
    m["subcolumn.union.disjoint"].push_back({"overlapping domains", [](ColumnFamily& f, const json&, Rng& rng) {
                                               if (f.at("pos1").empty()) return false;
                                               return set_out_of_range(f, "pos2", f.at("pos1").u64(0), rng);
                                             }});
    m["column.complementing"] = {
        dup_rule("pos"), shrink_rule("data1"),
        beyond_rule("pos", [](const ColumnFamily& f, const json&) { return size_of(f, "data1") + size_of(f, "data2"); })};
    m["column.overlaid"] = {dup_rule("overlay_pos"), shrink_rule("overlay_data"),
                            beyond_rule("overlay_pos", len_of("data"))};
    m["segmentation"] = {shift_first_rule("start"), shrink_rule("length")};
    m["segmentation.uniform"] = {zero_rule("segment_length"), grow_rule("overall_length")};
    m["segmented"] = {shrink_rule("data"), shift_first_rule("segment_start_pos"), shrink_rule("segment_length")};
    m["segmented.uniform"] = {zero_rule("segment_length"), grow_rule("segment_length")};
    m["subcolumn.segmented"] = {zero_rule("segment_length"), dup_rule("segment_pos"), grow_rule("segment_pos")};
    m["indexset.sparse"] = {dup_rule("members"),
                            beyond_rule("members", [](const ColumnFamily& f, const json&) { return scalar(f, "domain_length"); })};
    m["indexset.dense"] = {{"characteristic retyped", [](ColumnFamily& f, const json&, Rng&) {
                              std::vector<i128> v = f.at("characteristic").integers();
                              f["characteristic"] = Column::from_ints(ElementType::u(8), v);
                              return true;
                            }}};
    m["indexset.contiguous"] = {{"range past the domain", [](ColumnFamily& f, const json&, Rng&) {
                                   return set_scalar(f, "length", static_cast<i128>(scalar(f, "domain_length") -
                                                                                    scalar(f, "start") + 1));
                                 }},
                                grow_rule("start")};
    m["partition"] = {{"part ids not integers", [](ColumnFamily& f, const json&, Rng&) {
                         std::vector<bool> bits;
                         for (auto v : f.at("part_of").integers()) bits.push_back((v & 1) != 0);
                         f["part_of"] = Column::from_bits(bits);
                         return true;
                       }}};
    m["partition.k"] = {{"position in two parts", [](ColumnFamily& f, const json& p, Rng& rng) {
                           auto k = p.at("k").get<int>();
                           int a = static_cast<int>(draw(rng, 0, k - 1));
                           std::string src = "pos" + std::to_string(a);
                           if (f.at(src).empty()) return false;
                           for (int b = 0; b < k; ++b) {
                             std::string dst = "pos" + std::to_string(b);
                             if (b != a && !f.at(dst).empty()) {
                               return set_element(f, dst, any_index(rng, f.at(dst).size()), f.at(src).integer(0));
                             }
                           }
                           return duplicate(f, src, rng);
                         }},
                        shrink_rule("data0")};
    m["components"] = {{"component lengths differ", [](ColumnFamily& f, const json&, Rng&) {
                          return f.size() >= 2 && drop_last(f, "c0");
                        }}};
    auto not_divisible = Rule{"length not divisible by k", [](ColumnFamily& f, const json& p, Rng&) {
                                return p.at("k").get<int>() >= 2 && drop_last(f, "data");
                              }};
    m["components.concatenated"] = {not_divisible};
    m["components.shattered"] = {not_divisible};
    m["value.indicators"] = {{"indicator bit flipped", [](ColumnFamily& f, const json&, Rng& rng) {
                                const Column& c = f.at("indicators");
                                if (c.empty()) return false;
                                std::size_t i = any_index(rng, c.size());
                                return set_element(f, "indicators", i, 1 - c.integer(i));
                              }},
                             {"indicator length not a multiple of the domain", [](ColumnFamily& f, const json&, Rng&) {
                                return scalar(f, "domain_size") >= 2 && drop_last(f, "indicators");
                              }}};
    m["varwidth.std"] = {{"element overruns data", [](ColumnFamily& f, const json&, Rng& rng) {
                            const Column& l = f.at("element_length");
                            std::vector<std::size_t> nonempty;
                            for (std::size_t i = 0; i < l.size(); ++i) {
                              if (l.u64(i) > 0) nonempty.push_back(i);
                            }
                            if (nonempty.empty()) return false;
                            return set_element(f, "start_position", pick(rng, nonempty),
                                               static_cast<i128>(size_of(f, "values")));
                          }},
                         shrink_rule("element_length")};
    m["varwidth.capped"] = {beyond_rule("element_length",
                                        [](const ColumnFamily&, const json& p) {
                                          return static_cast<std::uint64_t>(p.at("max_length").get<int>()) + 1;
                                        }),
                            shrink_rule("slots")};
    m["nullable.complementing"] = {dup_rule("pos"), shrink_rule("values"), grow_rule("null_count")};
    m["nullable.patched"] = {dup_rule("null_pos"), beyond_rule("null_pos", len_of("base_data"))};
    m["constant"] = {grow_rule("value"), grow_rule("length")};
    m["generated"] = {shrink_rule("coefficients"), grow_rule("length")};
    m["generated.poly"] = {shrink_rule("coefficients"), grow_rule("length")};
    m["nullsup"] = {{"data retyped wider than the decoded type", [](ColumnFamily& f, const json& p, Rng& rng) {
                       ElementType t = decoded_type(p);
                       if (t.width() >= 64 || f.at("data").empty()) return false;
                       auto v = f.at("data").integers();
                       v[any_index(rng, v.size())] = t.max_value() + 1;
                       f["data"] = Column::from_ints(ElementType::i(64), v);
                       return true;
                     }}};
    m["run.full"] = {shift_first_rule("start"), shrink_rule("value"),
                     {"zero-length run", [](ColumnFamily& f, const json&, Rng& rng) {
                        return set_out_of_range(f, "length", 0, rng);
                      }}};
    m["run.rle"] = {shrink_rule("value"), {"zero-length run", [](ColumnFamily& f, const json&, Rng& rng) {
                                             return set_out_of_range(f, "length", 0, rng);
                                           }}};
    m["run.rle.capped"] = m["run.rle"];
    m["run.rle.capped"].push_back(beyond_rule("length", [](const ColumnFamily&, const json& p) {
      return static_cast<std::uint64_t>(p.at("r").get<int>()) + 1;
    }));
    m["run.rpe"] = {shift_first_rule("start"), dup_rule("start"), shrink_rule("value"),
                    beyond_rule("start", [](const ColumnFamily& f, const json&) { return scalar(f, "overall_length"); })};
    m["spline.generalized"] = {shrink_rule("coefficients"), shift_first_rule("segment_start_pos"),
                               {"zero-length segment", [](ColumnFamily& f, const json&, Rng& rng) {
                                  return set_out_of_range(f, "segment_length", 0, rng);
                                }}};
    m["spline.knotted"] = {shrink_rule("coefficients"), shift_first_rule("knots")};
    m["spline.equiknotted"] = {shrink_rule("coefficients"), zero_rule("interval_length")};
    m["for"] = {zero_rule("segment_length"), shrink_rule("reference"),
                {"reference overflows the decoded type", [](ColumnFamily& f, const json& p, Rng& rng) {
                   std::uint64_t l = scalar(f, "segment_length");
                   const Column& off = f.at("offsets");
                   std::vector<std::size_t> segs;
                   for (std::size_t i = 0; i < off.size(); ++i) {
                     if (off.u64(i) > 0 && (segs.empty() || segs.back() != i / l)) segs.push_back(i / l);
                   }
                   if (segs.empty()) return false;
                   return set_element(f, "reference", pick(rng, segs), decoded_type(p).max_value());
                 }}};
    m["delta.naive"] = {grow_rule("base"), {"base overflows the decoded type", [](ColumnFamily& f, const json& p, Rng&) {
                          ElementType t = decoded_type(p);
                          i128 run = 0, hi = 0, lo = 0;
                          for (auto d : f.at("delta").integers()) run += d, hi = std::max(hi, run), lo = std::min(lo, run);
                          if (hi > 0) return set_scalar(f, "base", t.max_value());
                          if (lo < 0) return set_scalar(f, "base", t.min_value());
                          return false;
                        }}};
    m["delta"] = {zero_rule("segment_length"), shrink_rule("bases")};
    m["delta.patched"] = {zero_rule("segment_length"), shrink_rule("bases"), dup_rule("patch_pos"),
                          shrink_rule("patch_data"),
                          beyond_rule("patch_pos", [](const ColumnFamily& f, const json&) { return size_of(f, "delta"); })};
    m["pvw"] = {shrink_rule("values"), grow_rule("group_width")};
    m["dict"] = {beyond_rule("indices", len_of("dictionary"))};
    m["dict.unique"] = {beyond_rule("indices", len_of("dictionary")), dup_rule("dictionary")};
    m["dict.monotone"] = {beyond_rule("indices", len_of("dictionary")),
                          {"entries out of order", [](ColumnFamily& f, const json&, Rng&) {
                             const Column& d = f.at("dictionary");
                             if (d.size() < 2) return false;
                             f["dictionary"] = take(d, {1, 0});
                             f["dictionary"] = concat({f["dictionary"], slice(d, 2, d.size())});
                             return true;
                           }}};
    m["segdict"] = {shrink_rule("dictionary_entries"), grow_rule("segment_length"),
                    beyond_rule("indices", [](const ColumnFamily&, const json& p) {
                      return static_cast<std::uint64_t>(p.at("dict_size").get<int>());
                    })};
    m["segdict.two_level"] = m["segdict"];
    m["segdict.two_level"].push_back(beyond_rule("dictionary_entries", len_of("global_dictionary")));
    m["cascade"] = {
        {"index past the phase dictionary", [](ColumnFamily& f, const json&, Rng& rng) {
           return set_out_of_range(f, "idx1", size_of(f, "dict1"), rng);
         }},
        {"deferred count mismatch", [](ColumnFamily& f, const json& p, Rng&) {
           if (p.at("bits").size() < 2) return false;
           return append_copy(f, "idx2") || [&] {
             f["idx2"] = Column::from_ints(f.at("idx2").type(), {1});
             return true;
           }();
         }},
        {"zero index in the last phase", [](ColumnFamily& f, const json& p, Rng& rng) {
           std::string last = "idx" + std::to_string(p.at("bits").size());
           if (f.at(last).empty()) return false;
           return set_element(f, last, any_index(rng, f.at(last).size()), 0);
         }}};
    auto prefix_rules = std::vector<Rule>{
        shrink_rule("suffixes"), grow_rule("domain_length"),
        {"zero-count block", [](ColumnFamily& f, const json&, Rng& rng) {
           return set_out_of_range(f, "suffix_counts", 0, rng);
         }}};
    m["idx.common_prefix"] = prefix_rules;
    m["idx.common_upper_half"] = prefix_rules;
    for (const char* id : {"vwdict", "vwdict.unique", "vwdict.monotone"}) {
      m[id] = {beyond_rule("indices", len_of("entry_lengths")), shrink_rule("entry_lengths")};
    }
    m["noisy.generated"] = {shrink_rule("b_data"), grow_rule("a_length")};
    m["subdict"] = {beyond_rule("indices", len_of("dictionary")), shrink_rule("residual_data")};
    return m;
  }();
  return rules;
}

}  // namespace

std::optional<Corruption> corrupt(const SchemeInstance& inst, Rng& rng) {
  const auto& table = corruption_rules();
  std::vector<Rule> rules;
  if (auto it = table.find(inst.scheme_id); it != table.end()) rules = it->second;
  rules.push_back({"unexpected column", [](ColumnFamily& f, const json&, Rng&) {
                     f["bogus"] = Column::from_u64(ElementType::u(8), {1});
                     return true;
                   }});
  rules.push_back({"missing column", [&inst](ColumnFamily& f, const json&, Rng& rng) {
                     if (f.empty()) return false;
                     std::vector<std::string> labels;
                     for (const auto& [label, col] : f) labels.push_back(label);
                     if (inst.scheme_id == "components") {
                       // Dropping the last component is still a valid, narrower product.
                       if (labels.size() >= 2) {
                         labels.erase(std::find(labels.begin(), labels.end(),
                                                "c" + std::to_string(labels.size() - 1)));
                       }
                     }
                     f.erase(pick(rng, labels));
                     return true;
                   }});
  std::shuffle(rules.begin(), rules.end(), rng);
  for (const auto& rule : rules) {
    Corruption out{inst, rule.what};
    if (rule.apply(out.instance.columns, inst.params, rng)) return out;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ random circuits

namespace {

struct Node {
  Wire wire;
  int length_class;  // wires of one class have equal length on every input
  std::int64_t bound;  // |value| <= bound
  std::int64_t max_len;
  std::int64_t min_len;
};

constexpr std::int64_t kMaxBound = std::int64_t{1} << 40;
constexpr std::int64_t kInputBound = 1000;
constexpr std::int64_t kInputMaxLength = 64;

}  // namespace

RandomCircuit random_circuit(Rng& rng, int vertices) {
  CircuitBuilder b;
  std::vector<Node> nodes;
  int inputs = static_cast<int>(draw(rng, 1, 3));
  for (int k = 0; k < inputs; ++k) nodes.push_back({b.input("x" + std::to_string(k), kI64), 0, kInputBound, kInputMaxLength, 1});
  Wire perm = b.input("perm", ElementType::u(64));
  int next_class = 1;
  std::vector<std::string> noops;

  auto pick_node = [&](auto pred) -> const Node* {
    std::vector<const Node*> ok;
    for (const auto& n : nodes) {
      if (pred(n)) ok.push_back(&n);
    }
    return ok.empty() ? nullptr : pick(rng, ok);
  };
  auto any_node = [](const Node&) { return true; };

  int made = 0;
  std::function<void()> last_op;
  while (made < vertices) {
    const Node* a = pick_node(any_node);
    int kind = static_cast<int>(draw(rng, 0, 11));
    std::function<void()> op;
    switch (kind) {
      case 0: {  // binary elementwise within a length class
        const Node* c = pick_node([&](const Node& n) { return n.length_class == a->length_class; });
        static const std::vector<std::string> fns = {"add", "sub", "min", "max"};
        std::string fn = pick(rng, fns);
        std::int64_t bound = fn == "min" || fn == "max" ? std::max(a->bound, c->bound) : a->bound + c->bound;
        if (bound > kMaxBound) continue;
        Node x = *a, y = *c;
        op = [&, x, y, fn, bound] { nodes.push_back({b.ew(fn, {x.wire, y.wire}), x.length_class, bound, x.max_len, x.min_len}); };
        break;
      }
      case 1: {
        auto k = draw(rng, -1000, 1000);
        if (a->bound + 1000 > kMaxBound) continue;
        Node x = *a;
        op = [&, x, k] { nodes.push_back({b.ew_const("add", x.wire, k), x.length_class, x.bound + 1000, x.max_len, x.min_len}); };
        break;
      }
      case 2: {
        auto k = draw(rng, -3, 3);
        if (a->bound * 3 > kMaxBound) continue;
        Node x = *a;
        op = [&, x, k] { nodes.push_back({b.ew("scale", {x.wire}, json{{"k", k}}), x.length_class, x.bound * 3, x.max_len, x.min_len}); };
        break;
      }
      case 3: {
        bool use_max = draw(rng, 0, 1);
        bool inclusive = use_max || draw(rng, 0, 1);  // exclusive max starts at the i64 minimum
        std::int64_t bound = use_max ? a->bound : a->bound * a->max_len;
        if (bound > kMaxBound) continue;
        Node x = *a;
        op = [&, x, use_max, inclusive, bound] {
          nodes.push_back({b.prefix(x.wire, use_max ? "max" : "add", inclusive, kI64), x.length_class, bound, x.max_len, x.min_len});
        };
        break;
      }
      case 4: {
        const Node* c = pick_node([&](const Node& n) { return n.length_class == a->length_class; });
        const Node* d = pick_node([&](const Node& n) { return n.length_class == a->length_class; });
        Node x = *a, y = *c, z = *d;
        op = [&, x, y, z] {
          Wire same = b.is_same_as_previous(x.wire);
          nodes.push_back({b.if_else(same, y.wire, z.wire), x.length_class, std::max(y.bound, z.bound), x.max_len, x.min_len});
        };
        break;
      }
      case 5:
      case 6: {
        const Node* x0 = pick_node([](const Node& n) { return n.length_class == 0; });
        if (!x0) continue;
        Node x = *x0;
        bool gather = kind == 5;
        op = [&, x, gather] {
          nodes.push_back({gather ? b.gather(perm, x.wire) : b.permute(perm, x.wire), 0, x.bound, x.max_len, x.min_len});
        };
        break;
      }
      case 7: {
        if (a->bound * 2 > kMaxBound || a->min_len < 1) continue;
        Node x = *a;
        op = [&, x] { nodes.push_back({b.derivative(x.wire), next_class++, x.bound * 2, x.max_len - 1, x.min_len - 1}); };
        break;
      }
      case 8: {
        const Node* c = pick_node([&](const Node& n) { return n.length_class == a->length_class; });
        Node x = *a, y = *c;
        op = [&, x, y] {
          Wire keep = b.ew("lt", {x.wire, y.wire});
          nodes.push_back({b.select(x.wire, keep), next_class++, x.bound, x.max_len, 0});
        };
        break;
      }
      case 9: {
        const Node* c = pick_node(any_node);
        if (a->max_len + c->max_len > 4 * kInputMaxLength) continue;
        Node x = *a, y = *c;
        op = [&, x, y] {
          nodes.push_back({b.concat({x.wire, y.wire}), next_class++, std::max(x.bound, y.bound), x.max_len + y.max_len,
                           x.min_len + y.min_len});
        };
        break;
      }
      case 10: {  // NoOp splice on a full-length wire
        const Node* x0 = pick_node([](const Node& n) { return n.length_class == 0; });
        if (!x0) continue;
        Node x = *x0;
        op = [&, x] {
          Wire w = b.noop(x.wire);
          noops.push_back(w.vertex);
          nodes.push_back({w, 0, x.bound, x.max_len, x.min_len});
        };
        break;
      }
      default: {  // repeat the previous operation verbatim
        if (!last_op) continue;
        op = last_op;
        break;
      }
    }
    op();
    last_op = kind == 10 ? nullptr : op;
    ++made;
  }
  int outs = static_cast<int>(draw(rng, 1, 3));
  std::set<std::string> used;
  for (int k = 0; k < outs; ++k) {
    const Node& n = nodes[nodes.size() - 1 - any_index(rng, std::min<std::size_t>(nodes.size(), 6))];
    std::string key = n.wire.vertex + "." + n.wire.port;
    if (!used.insert(key).second) continue;
    b.output("y" + std::to_string(k), n.wire);
  }

  RandomCircuit out;
  out.circuit = b.build();
  out.noop_ids = noops;
  // Topological order, ties broken by id.
  std::map<std::string, int> indeg;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [id, op] : out.circuit.vertices()) indeg[id] = 0;
  for (const auto& e : out.circuit.edges()) {
    ++indeg[e.to.vertex];
    succ[e.from.vertex].push_back(e.to.vertex);
  }
  std::set<std::string> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.insert(id);
  }
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    out.creation_order.push_back(id);
    for (const auto& s : succ[id]) {
      if (--indeg[s] == 0) ready.insert(s);
    }
  }
  return out;
}

ColumnFamily random_circuit_inputs(const Circuit& c, Rng& rng, std::size_t n) {
  ColumnFamily in;
  for (const auto& port : c.signature().inputs) {
    if (port.label == "perm") {
      std::vector<std::uint64_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      in[port.label] = Column::from_u64(port.type, p);
    } else {
      in[port.label] = random_ints(rng, port.type, n, -kInputBound, kInputBound);
    }
  }
  return in;
}

Circuit derivative_identity_circuit(const ElementType& t) {
  CircuitBuilder b;
  Wire col = b.input("col", t);
  Wire sums = b.prefix_sum(b.derivative(col));
  auto [head, rest] = b.split_first(col);
  (void)rest;
  Wire tail = b.ew("add", {sums, b.replicate(head, b.length(sums))});
  b.output("res", b.concat({head, tail}));
  return b.build();
}

}  // namespace colcirc::testing
