// Dictionary, index-set and variable-width dictionary schemes.

#include <algorithm>
#include <map>
#include <numeric>

#include "colcirc/ops.hpp"
#include "colcirc/schemes.hpp"
#include "scheme_support.hpp"

namespace colcirc::detail {

namespace {

ElementType type_at(const TypeMap& t, const std::string& label) {
  auto it = t.find(label);
  require(it != t.end(), Errc::missing_input, "decoder: no encoded column '" + label + "'");
  return it->second;
}

void check_indices_below(const Column& idx, std::uint64_t bound, const std::string& what) {
  check(idx.type().is_integer(), what + " must be integers");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    check(idx.integer(i) >= 0 && idx.integer(i) < static_cast<i128>(bound),
          what + " at " + std::to_string(i) + " is outside 0.." + std::to_string(bound) + "-1");
  }
}

bool all_distinct(const Column& c) {
  std::vector<Value> v;
  for (std::size_t i = 0; i < c.size(); ++i) v.push_back(c.value(i));
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

// ----------------------------------------------------------- dictionaries

enum class DictKind { plain, unique, monotone };

struct Dictionary {
  std::vector<std::size_t> entries;  // index of each entry's first occurrence
  std::vector<std::uint64_t> codes;
};

Dictionary build_dictionary(const Column& col, bool sorted) {
  Dictionary d;
  std::map<Value, std::uint64_t> code;
  for (std::size_t i = 0; i < col.size(); ++i) {
    auto [it, fresh] = code.emplace(col.value(i), d.entries.size());
    if (fresh) d.entries.push_back(i);
  }
  if (sorted) {
    std::vector<std::size_t> order(d.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return col.value(d.entries[a]) < col.value(d.entries[b]);
    });
    std::vector<std::size_t> entries;
    for (std::size_t r = 0; r < order.size(); ++r) {
      entries.push_back(d.entries[order[r]]);
      code[col.value(d.entries[order[r]])] = r;
    }
    d.entries = std::move(entries);
  }
  for (std::size_t i = 0; i < col.size(); ++i) d.codes.push_back(code.at(col.value(i)));
  return d;
}

void register_dictionaries(CodecRegistry& reg) {
  for (DictKind kind : {DictKind::plain, DictKind::unique, DictKind::monotone}) {
    CodecEntry e;
    e.scheme_id = kind == DictKind::plain ? "dict" : kind == DictKind::unique ? "dict.unique" : "dict.monotone";
    e.summary = kind == DictKind::plain    ? "values replaced by indices into a dictionary"
                : kind == DictKind::unique ? "dictionary with no repeated entries"
                                           : "dictionary with strictly increasing entries";
    e.param_schema = {{"index_type", "index type (default u32)"}};
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto dict = b.input("dictionary", type_at(t, "dictionary"));
      auto idx = b.input("indices", type_at(t, "indices"));
      b.output(kColumnLabel, b.gather(idx, dict));
      return b.build();
    };
    e.encode = [kind](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType it = ptype(p, "index_type", kU32);
      Dictionary d = build_dictionary(col, kind == DictKind::monotone);
      return SchemeInstance{"", json{{"index_type", it.to_string()}},
                            {{"dictionary", take(col, d.entries)}, {"indices", index_column(it, d.codes, "indices")}}};
    };
    e.verify = [kind](const json&, const ColumnFamily& c) {
      expect_labels(c, {"dictionary", "indices"});
      const Column& dict = need(c, "dictionary");
      check_indices_below(need(c, "indices"), dict.size(), "index");
      if (kind == DictKind::unique) check(all_distinct(dict), "dictionary has a repeated entry");
      if (kind == DictKind::monotone) check(strictly_increasing(dict), "dictionary is not strictly increasing");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ------------------------------------------------- segment dictionaries

struct SegmentDicts {
  std::uint64_t d = 1;
  std::vector<i128> entries;  // values (or global codes), d per segment
  std::vector<std::uint64_t> indices;
};

SegmentDicts segment_dictionaries(const std::vector<i128>& v, std::size_t l, std::int64_t want_d) {
  SegmentDicts out;
  std::vector<std::vector<i128>> per;
  for (std::size_t s = 0; s < v.size(); s += l) {
    std::vector<i128> entries;
    std::map<i128, std::uint64_t> code;
    for (std::size_t i = s; i < std::min(v.size(), s + l); ++i) {
      auto [it, fresh] = code.emplace(v[i], entries.size());
      if (fresh) entries.push_back(v[i]);
      out.indices.push_back(it->second);
    }
    out.d = std::max<std::uint64_t>(out.d, entries.size());
    per.push_back(std::move(entries));
  }
  if (want_d > 0) {
    if (out.d > static_cast<std::uint64_t>(want_d)) {
      not_encodable("a segment has " + std::to_string(out.d) + " distinct values, more than dict_size");
    }
    out.d = static_cast<std::uint64_t>(want_d);
  }
  for (auto& e : per) {
    e.resize(out.d, 0);
    out.entries.insert(out.entries.end(), e.begin(), e.end());
  }
  return out;
}

Wire segment_lookup(CircuitBuilder& b, const Wire& l, const Wire& entries, const Wire& idx, std::int64_t d) {
  auto [q, r] = div_mod_index(b, b.length(idx), l);
  (void)r;
  Wire pos = b.ew("add", {b.cast(idx, kU64), b.ew("scale", {q}, json{{"k", d}})});
  return b.gather(pos, entries);
}

void register_segment_dictionaries(CodecRegistry& reg) {
  for (bool two_level : {false, true}) {
    CodecEntry e;
    e.scheme_id = two_level ? "segdict.two_level" : "segdict";
    e.summary = two_level ? "per-segment dictionaries of codes into one global dictionary"
                          : "a dictionary of dict_size entries per uniform segment";
    e.param_schema = {{"segment_length", "segment length (default 128)"},
                      {"dict_size", "entries per segment (default: most distinct values in a segment)"},
                      {"index_type", "index type (default u32)"}};
    e.build_decoder = [two_level](const json& p, const TypeMap& t) {
      auto d = param_int(p, "dict_size");
      CircuitBuilder b;
      auto l = b.input("segment_length", type_at(t, "segment_length"));
      auto entries = b.input("dictionary_entries", type_at(t, "dictionary_entries"));
      auto idx = b.input("indices", type_at(t, "indices"));
      Wire v = segment_lookup(b, l, entries, idx, d);
      if (two_level) v = b.gather(v, b.input("global_dictionary", type_at(t, "global_dictionary")));
      b.output(kColumnLabel, v);
      return b.build();
    };
    e.encode = [two_level](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType it = ptype(p, "index_type", kU32);
      auto l = param_int_or(p, "segment_length", 128);
      require(l >= 1, Errc::invalid_argument, "segment_length must be positive");
      std::vector<i128> keys;
      Column global;
      if (two_level) {
        Dictionary g = build_dictionary(col, false);
        global = take(col, g.entries);
        keys.assign(g.codes.begin(), g.codes.end());
      } else {
        require(col.type().is_integer(), Errc::type_mismatch, "segdict needs an integer column");
        keys = col.integers();
      }
      SegmentDicts sd = segment_dictionaries(keys, static_cast<std::size_t>(l), param_int_or(p, "dict_size", 0));
      SchemeInstance inst{"",
                          json{{"segment_length", l},
                               {"dict_size", sd.d},
                               {"index_type", it.to_string()}},
                          {{"segment_length", scalar_of(kU32, l, "segment_length")},
                           {"dictionary_entries", int_column(two_level ? it : col.type(), sd.entries, "dictionary_entries")},
                           {"indices", index_column(it, sd.indices, "indices")}}};
      if (two_level) inst.columns["global_dictionary"] = global;
      return inst;
    };
    e.verify = [two_level](const json& p, const ColumnFamily& c) {
      if (two_level) {
        expect_labels(c, {"segment_length", "dictionary_entries", "indices", "global_dictionary"});
      } else {
        expect_labels(c, {"segment_length", "dictionary_entries", "indices"});
      }
      auto d = param_int(p, "dict_size");
      check(d >= 1, "dict_size must be positive");
      std::uint64_t l = need_scalar(c, "segment_length");
      check(l >= 1, "segment_length must be positive");
      const Column& idx = need(c, "indices");
      const Column& entries = need(c, "dictionary_entries");
      std::uint64_t segments = (idx.size() + l - 1) / l;
      check(entries.size() == segments * static_cast<std::uint64_t>(d), "dict_size entries per segment required");
      check_indices_below(idx, static_cast<std::uint64_t>(d), "index");
      if (two_level) check_indices_below(entries, need(c, "global_dictionary").size(), "global code");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ---------------------------------------------------------------- cascade

void register_cascade(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "cascade";
  e.summary = "k dictionary phases; index 0 defers an element to the next phase";
  e.param_schema = {{"bits", "index width per phase, e.g. [2, 4, 8]"}};
  e.build_decoder = [](const json& p, const TypeMap& t) {
    auto bits = param_int_list(p, "bits");
    require(!bits.empty(), Errc::invalid_argument, "cascade needs at least one phase");
    CircuitBuilder b;
    std::vector<Wire> idx, dict;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      std::string s = std::to_string(i + 1);
      idx.push_back(b.input("idx" + s, type_at(t, "idx" + s)));
      dict.push_back(b.input("dict" + s, type_at(t, "dict" + s)));
    }
    Wire pending = b.iota(b.length(idx[0]));
    std::vector<Wire> pos, vals;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      Wire hit = b.ew_const("ne", idx[i], 0);
      vals.push_back(b.gather(b.select(idx[i], hit), dict[i]));
      pos.push_back(b.select(pending, hit));
      if (i + 1 < bits.size()) pending = b.select(pending, b.ew("not", {hit}));
    }
    Wire all_pos = pos.size() == 1 ? pos[0] : b.concat(pos);
    Wire all_vals = vals.size() == 1 ? vals[0] : b.concat(vals);
    b.output(kColumnLabel, b.permute(all_pos, all_vals));
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    const Column& col = input_column(in);
    auto bits = param_int_list(p, "bits");
    require(!bits.empty(), Errc::invalid_argument, "cascade needs at least one phase");
    for (auto w : bits) require(w >= 1 && w <= 32, Errc::invalid_argument, "phase widths must be in 1..32");
    // Distinct values by descending frequency, ties by first occurrence.
    Dictionary d = build_dictionary(col, false);
    std::vector<std::uint64_t> freq(d.entries.size(), 0);
    for (auto c : d.codes) ++freq[c];
    std::vector<std::size_t> order(d.entries.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return freq[a] > freq[b]; });
    std::vector<std::size_t> level(d.entries.size()), code(d.entries.size());
    std::vector<std::vector<std::size_t>> members(bits.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < bits.size() && next < order.size(); ++i) {
      std::size_t cap = (std::size_t{1} << bits[i]) - 1;
      while (members[i].size() < cap && next < order.size()) {
        level[order[next]] = i;
        members[i].push_back(d.entries[order[next]]);
        code[order[next]] = members[i].size();
        ++next;
      }
    }
    if (next < order.size()) {
      not_encodable(std::to_string(order.size() - next) + " distinct values do not fit the phase widths");
    }
    SchemeInstance inst{"", json{{"bits", bits}}, {}};
    json coverage = json::array();
    std::vector<std::size_t> pending(col.size());
    std::iota(pending.begin(), pending.end(), 0);
    Column placeholder = zero_scalar(col.type());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      std::vector<std::uint64_t> idx;
      std::vector<std::size_t> rest;
      for (auto r : pending) {
        std::size_t c = d.codes[r];
        bool here = level[c] == i;
        idx.push_back(here ? code[c] : 0);
        if (!here) rest.push_back(r);
      }
      std::string s = std::to_string(i + 1);
      inst.columns["idx" + s] = index_column(ElementType::u(static_cast<int>(bits[i])), idx, "phase index");
      inst.columns["dict" + s] = concat({placeholder, take(col, members[i])});
      coverage.push_back(col.empty() ? 0.0 : static_cast<double>(pending.size() - rest.size()) / col.size());
      pending = std::move(rest);
    }
    inst.params["coverage"] = coverage;
    return inst;
  };
  e.verify = [](const json& p, const ColumnFamily& c) {
    auto bits = param_int_list(p, "bits");
    check(!bits.empty(), "cascade needs at least one phase");
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= bits.size(); ++i) {
      labels.push_back("idx" + std::to_string(i));
      labels.push_back("dict" + std::to_string(i));
    }
    expect_labels(c, labels);
    std::uint64_t expected = need(c, "idx1").size();
    for (std::size_t i = 0; i < bits.size(); ++i) {
      std::string s = std::to_string(i + 1);
      const Column& idx = need(c, "idx" + s);
      const Column& dict = need(c, "dict" + s);
      check(bits[i] >= 1 && bits[i] <= 32, "phase width out of range");
      check(idx.type() == ElementType::u(static_cast<int>(bits[i])), "idx" + s + " must be u" + std::to_string(bits[i]));
      check(dict.type() == need(c, "dict1").type(), "dictionaries differ in type");
      check(dict.size() >= 1 && dict.size() <= (std::uint64_t{1} << bits[i]), "dict" + s + " size out of range");
      check(idx.size() == expected, "idx" + s + " length does not match the elements left by earlier phases");
      check_indices_below(idx, dict.size(), "idx" + s);
      std::uint64_t zeros = 0;
      for (std::size_t r = 0; r < idx.size(); ++r) zeros += idx.u64(r) == 0;
      expected = zeros;
    }
    check(expected == 0, "elements remain after the last phase");
    return VerifyResult::accept();
  };
  reg.register_codec(std::move(e));
}

// ------------------------------------------------------ common-prefix sets

struct SortedSet {
  const Column* full;
  std::vector<std::uint64_t> elements;
};

SortedSet index_set(const ColumnFamily& in, int w) {
  const Column& full = need(in, "full_length");
  const Column& el = need(in, "elements");
  require(in.size() == 2 && full.size() == 1 && full.type() == el.type() && el.type().is_integer(),
          Errc::invalid_argument, "expected scalar 'full_length' and 'elements' of one integer type");
  if (!distinct_below(el, full.u64(0))) not_encodable("elements must be distinct and below full_length");
  auto v = indices_of(el);
  std::sort(v.begin(), v.end());
  for (auto x : v) {
    if (w < 64 && (x >> w) != 0) not_encodable("element " + std::to_string(x) + " exceeds " + std::to_string(w) + " bits");
  }
  return {&full, v};
}

struct Blocks {
  std::vector<std::uint64_t> prefixes, counts, suffixes, singles;
};

Blocks group_blocks(const std::vector<std::uint64_t>& v, int w, int p, bool split_singles) {
  Blocks out;
  int low = w - p;
  std::uint64_t mask = (std::uint64_t{1} << low) - 1;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && (v[j] >> low) == (v[i] >> low)) ++j;
    if (split_singles && j - i == 1) {
      out.singles.push_back(v[i]);
    } else {
      if (j - i > mask) not_encodable("block " + std::to_string(v[i] >> low) + " is full");
      out.prefixes.push_back(v[i] >> low);
      out.counts.push_back(j - i);
      for (std::size_t k = i; k < j; ++k) out.suffixes.push_back(v[k] & mask);
    }
    i = j;
  }
  return out;
}

std::pair<int, int> prefix_widths(const json& p, bool upper_half) {
  auto w = param_int(p, "w");
  require(w >= 2 && w <= 64, Errc::invalid_argument, "w must be in 2..64");
  if (upper_half) {
    require(w % 2 == 0, Errc::invalid_argument, "w must be even");
    return {static_cast<int>(w), static_cast<int>(w / 2)};
  }
  auto pre = param_int(p, "p");
  require(pre >= 1 && pre < w, Errc::invalid_argument, "p must be in 1..w-1");
  return {static_cast<int>(w), static_cast<int>(pre)};
}

// Returns the largest element, or nullopt for an empty set.
std::optional<std::uint64_t> check_blocks(const ColumnFamily& c, int w, int p) {
  const Column& pre = need_typed(c, "prefixes", ElementType::u(p));
  const Column& cnt = need_typed(c, "suffix_counts", ElementType::u(w - p));
  const Column& suf = need_typed(c, "suffixes", ElementType::u(w - p));
  check(pre.size() == cnt.size(), "prefixes and suffix_counts differ in count");
  check(strictly_increasing(pre), "prefixes must be strictly increasing");
  std::uint64_t at = 0;
  for (std::size_t j = 0; j < cnt.size(); ++j) {
    check(cnt.u64(j) >= 1, "empty block " + std::to_string(j));
    check(at + cnt.u64(j) <= suf.size(), "suffix counts exceed the suffixes");
    for (std::uint64_t k = at + 1; k < at + cnt.u64(j); ++k) {
      check(suf.u64(k) > suf.u64(k - 1), "suffixes within block " + std::to_string(j) + " must increase");
    }
    at += cnt.u64(j);
  }
  check(at == suf.size(), "suffix counts do not sum to the suffix count");
  if (pre.size() == 0) return std::nullopt;
  return (pre.u64(pre.size() - 1) << (w - p)) | suf.u64(suf.size() - 1);
}

Wire block_elements(CircuitBuilder& b, const Wire& pre, const Wire& cnt, const Wire& suf, int low) {
  Wire blk = b.expand_runs(cnt);
  Wire hi = b.ew("scale", {b.cast(b.gather(blk, pre), kU64)}, json{{"k", std::uint64_t{1} << low}});
  return b.ew("add", {hi, b.cast(suf, kU64)});
}

ColumnFamily canonical_index_set(const ColumnFamily& f) {
  const Column& el = need(f, "elements");
  std::vector<std::size_t> order(el.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return el.integer(a) < el.integer(b); });
  return {{"full_length", need(f, "full_length")}, {"elements", take(el, order)}};
}

void register_common_prefix(CodecRegistry& reg) {
  for (bool upper : {false, true}) {
    CodecEntry e;
    e.scheme_id = upper ? "idx.common_upper_half" : "idx.common_prefix";
    e.summary = upper ? "index set split into blocks by the upper w/2 bits; lone elements kept whole"
                      : "sorted index set grouped by the top p of w bits";
    e.param_schema = upper ? json{{"w", "element bit width (even)"}}
                           : json{{"w", "element bit width"}, {"p", "prefix bit width"}};
    e.build_decoder = [upper](const json& p, const TypeMap& t) {
      auto [w, pre_w] = prefix_widths(p, upper);
      CircuitBuilder b;
      auto full = b.input("domain_length", type_at(t, "domain_length"));
      auto pre = b.input("prefixes", type_at(t, "prefixes"));
      auto cnt = b.input("suffix_counts", type_at(t, "suffix_counts"));
      auto suf = b.input("suffixes", type_at(t, "suffixes"));
      Wire el = block_elements(b, pre, cnt, suf, w - pre_w);
      if (upper) {
        Wire naive = b.cast(b.input("naive", type_at(t, "naive")), kU64);
        el = sort_indices(b, b.cast(b.concat({naive, el}), full.type), full);
      } else {
        el = b.cast(el, full.type);
      }
      b.output("full_length", full);
      b.output("elements", el);
      return b.build();
    };
    e.encode = [upper](const json& p, const ColumnFamily& in) {
      auto [w, pre_w] = prefix_widths(p, upper);
      SortedSet s = index_set(in, w);
      Blocks blk = group_blocks(s.elements, w, pre_w, upper);
      int low = w - pre_w;
      json params = upper ? json{{"w", w}} : json{{"w", w}, {"p", pre_w}};
      SchemeInstance inst{"", params,
                          {{"domain_length", *s.full},
                           {"prefixes", index_column(ElementType::u(pre_w), blk.prefixes, "prefixes")},
                           {"suffix_counts", index_column(ElementType::u(low), blk.counts, "suffix_counts")},
                           {"suffixes", index_column(ElementType::u(low), blk.suffixes, "suffixes")}}};
      if (upper) inst.columns["naive"] = index_column(ElementType::u(w), blk.singles, "naive");
      return inst;
    };
    e.verify = [upper](const json& p, const ColumnFamily& c) {
      auto [w, pre_w] = prefix_widths(p, upper);
      if (upper) {
        expect_labels(c, {"domain_length", "prefixes", "suffix_counts", "suffixes", "naive"});
      } else {
        expect_labels(c, {"domain_length", "prefixes", "suffix_counts", "suffixes"});
      }
      std::uint64_t n = need_scalar(c, "domain_length");
      auto top = check_blocks(c, w, pre_w);
      if (top) check(*top < n, "an element lies beyond domain_length");
      if (upper) {
        const Column& naive = need_typed(c, "naive", ElementType::u(w));
        const Column& pre = need(c, "prefixes");
        std::vector<std::uint64_t> taken = indices_of(pre);
        int low = w - pre_w;
        for (std::size_t i = 0; i < naive.size(); ++i) {
          check(naive.u64(i) < n, "a lone element lies beyond domain_length");
          taken.push_back(naive.u64(i) >> low);
        }
        std::sort(taken.begin(), taken.end());
        check(std::adjacent_find(taken.begin(), taken.end()) == taken.end(),
              "a lone element shares its block with another element");
      }
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_index_set;
    reg.register_codec(std::move(e));
  }
}

// ------------------------------------------- variable-width dictionaries

void register_vwdict(CodecRegistry& reg) {
  for (DictKind kind : {DictKind::plain, DictKind::unique, DictKind::monotone}) {
    CodecEntry e;
    e.scheme_id = kind == DictKind::plain    ? "vwdict"
                  : kind == DictKind::unique ? "vwdict.unique"
                                             : "vwdict.monotone";
    e.summary = "variable-width elements as indices into (start, length) ranges of entry_data";
    e.param_schema = {{"index_type", "index and position type (default u32)"},
                      {"length_type", "decoded length type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto idx = b.input("indices", type_at(t, "indices"));
      auto starts = b.input("entry_start_positions", type_at(t, "entry_start_positions"));
      auto lens = b.input("entry_lengths", type_at(t, "entry_lengths"));
      auto data = b.input("entry_data", type_at(t, "entry_data"));
      Wire len = b.gather(idx, lens);
      auto [src, elem] = expand_ranges(b, b.gather(idx, starts), len);
      (void)elem;
      b.output("length", b.cast(len, ptype(p, "length_type", kU32)));
      b.output("data", b.gather(src, data));
      return b.build();
    };
    e.encode = [kind](const json& p, const ColumnFamily& in) {
      const Column& len = need(in, "length");
      const Column& data = need(in, "data");
      require(in.size() == 2 && len.type().is_integer() && total_of(len) == data.size(), Errc::invalid_argument,
              "expected a variable-width family {length, data}");
      ElementType it = ptype(p, "index_type", kU32);
      std::vector<std::vector<Value>> elems;
      for (std::size_t i = 0, at = 0; i < len.size(); at += len.u64(i), ++i) {
        std::vector<Value> e;
        for (std::size_t k = 0; k < len.u64(i); ++k) e.push_back(data.value(at + k));
        elems.push_back(std::move(e));
      }
      std::map<std::vector<Value>, std::uint64_t> code;
      std::vector<std::size_t> entries;
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (code.emplace(elems[i], entries.size()).second) entries.push_back(i);
      }
      if (kind == DictKind::monotone) {
        std::sort(entries.begin(), entries.end(), [&](std::size_t a, std::size_t b) { return elems[a] < elems[b]; });
        for (std::size_t r = 0; r < entries.size(); ++r) code[elems[entries[r]]] = r;
      }
      std::vector<std::uint64_t> idx, starts, lens;
      std::vector<Column> pieces;
      std::uint64_t at = 0;
      for (auto i : entries) {
        starts.push_back(at);
        lens.push_back(elems[i].size());
        at += elems[i].size();
        pieces.push_back(varwidth_element(in, i));
      }
      for (const auto& el : elems) idx.push_back(code.at(el));
      return SchemeInstance{"", json{{"index_type", it.to_string()}, {"length_type", len.type().to_string()}},
                            {{"indices", index_column(it, idx, "indices")},
                             {"entry_start_positions", index_column(it, starts, "entry_start_positions")},
                             {"entry_lengths", index_column(it, lens, "entry_lengths")},
                             {"entry_data", pieces.empty() ? empty_column(data.type()) : concat(pieces)}}};
    };
    e.verify = [kind](const json&, const ColumnFamily& c) {
      expect_labels(c, {"indices", "entry_start_positions", "entry_lengths", "entry_data"});
      const Column& s = need(c, "entry_start_positions");
      const Column& l = need(c, "entry_lengths");
      const Column& data = need(c, "entry_data");
      expect_index_type(s, "entry_start_positions");
      expect_index_type(l, "entry_lengths");
      check(s.size() == l.size(), "entry starts and lengths differ in count");
      check_indices_below(need(c, "indices"), s.size(), "index");
      std::vector<std::vector<Value>> entries;
      for (std::size_t j = 0; j < s.size(); ++j) {
        check(s.u64(j) <= data.size() && l.u64(j) <= data.size() - s.u64(j),
              "entry " + std::to_string(j) + " overruns entry_data");
        if (kind != DictKind::plain) {
          std::vector<Value> e;
          for (std::uint64_t k = 0; k < l.u64(j); ++k) e.push_back(data.value(s.u64(j) + k));
          entries.push_back(std::move(e));
        }
      }
      if (kind == DictKind::unique) {
        auto sorted = entries;
        std::sort(sorted.begin(), sorted.end());
        check(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "dictionary has a repeated entry");
      }
      if (kind == DictKind::monotone) {
        for (std::size_t j = 1; j < entries.size(); ++j) {
          check(entries[j - 1] < entries[j], "entries are not strictly increasing");
        }
      }
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

}  // namespace

void register_dictionary_schemes(CodecRegistry& reg) {
  register_dictionaries(reg);
  register_segment_dictionaries(reg);
  register_cascade(reg);
  register_common_prefix(reg);
  register_vwdict(reg);
}

}  // namespace colcirc::detail
