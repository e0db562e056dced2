// Generic composition recipes and the composed builtin schemes.

#include <algorithm>
#include <optional>
#include <set>

#include "colcirc/ops.hpp"
#include "colcirc/transform.hpp"
#include "scheme_support.hpp"

namespace colcirc {

namespace {

using detail::check;
using detail::kI64;
using detail::kU32;
using detail::kU64;
using detail::not_encodable;
using detail::ptype;

ColumnFamily strip_prefix(const ColumnFamily& f, const std::string& prefix) {
  ColumnFamily out;
  for (const auto& [label, col] : f) {
    if (label.rfind(prefix, 0) == 0) out.emplace(label.substr(prefix.size()), col);
  }
  return out;
}

TypeMap strip_prefix(const TypeMap& t, const std::string& prefix) {
  TypeMap out;
  for (const auto& [label, type] : t) {
    if (label.rfind(prefix, 0) == 0) out.emplace(label.substr(prefix.size()), type);
  }
  return out;
}

void add_prefixed(ColumnFamily& out, const std::string& prefix, const ColumnFamily& inner) {
  for (const auto& [label, col] : inner) out.emplace(prefix + label, col);
}

ElementType output_type(const Circuit& c, const std::string& label) {
  for (const auto& p : c.signature().outputs) {
    if (p.label == label) return p.type;
  }
  fail(Errc::invalid_argument, "decoder has no output '" + label + "'");
}

// Integer values of a column as i128; the decoded column type must be integer.
std::vector<i128> integers_of(const Column& c) {
  require(c.type().is_integer(), Errc::type_mismatch, "composition needs an integer column");
  return c.integers();
}

Column i64_column(const std::vector<i128>& v, const char* what) { return detail::int_column(kI64, v, what); }

// One composed codec: the recipe plus the registry its inner schemes live in.
class Composer {
 public:
  Composer(CompositionRecipe recipe, const CodecRegistry* reg) : recipe_(std::move(recipe)), reg_(reg) {
    std::size_t want = recipe_.kind == RecipeKind::alternate || recipe_.kind == RecipeKind::elementwise_add ? 2 : 1;
    require(recipe_.inner.size() == want, Errc::incompatible_schemes,
            "recipe for '" + recipe_.scheme_id + "' needs " + std::to_string(want) + " inner scheme(s)");
  }

  CodecEntry entry() const;

 private:
  struct Part {
    std::string key;  // params key
    std::string prefix;
    const InnerScheme* scheme;
  };

  std::vector<Part> parts() const;
  const CodecEntry& inner_entry(const Part& part) const { return reg_->find(part.scheme->scheme_id); }
  json inner_params(const json& p, const Part& part) const {
    json q = part.scheme->params;
    if (p.contains(part.key)) q.merge_patch(p[part.key]);
    return q;
  }
  json recipe_param(const json& p, const char* key, json fallback) const {
    if (p.contains(key)) return p[key];
    return recipe_.params.value(key, fallback);
  }

  SchemeInstance inner_instance(const json& p, const Part& part, const ColumnFamily& f) const {
    return SchemeInstance{part.scheme->scheme_id, inner_params(p, part), strip_prefix(f, part.prefix)};
  }
  Column inner_decode(const SchemeInstance& inst) const { return detail::host_decode(inst, *reg_); }
  Circuit inner_decoder(const json& p, const Part& part, const TypeMap& t) const {
    return inner_entry(part).build_decoder(inner_params(p, part), strip_prefix(t, part.prefix));
  }
  // An encoded form close to `col`, exact when the scheme has no approximation.
  SchemeInstance approximate(const json& p, const Part& part, const Column& col) const {
    const auto& e = inner_entry(part);
    json q = inner_params(p, part);
    if (!e.approximate) return encode(part.scheme->scheme_id, q, col, *reg_);
    q["type"] = col.type().to_string();
    SchemeInstance inst = e.approximate(q, col);
    inst.scheme_id = part.scheme->scheme_id;
    return inst;
  }

  Circuit build_decoder(const json& p, const TypeMap& t) const;
  SchemeInstance encode_column(const json& p, const Column& col) const;
  void verify_structure(const json& p, const ColumnFamily& c) const;

  // Segment-wise storage of a single inner scheme.
  struct Batch {
    std::string id;
    json params;
    std::string shape;
    TypeMap types;
    std::map<std::string, std::vector<Column>> pieces;
    std::size_t segments = 0;
  };
  std::string shape_of(const std::string& id, const json& params, const TypeMap& t) const {
    return circuit_to_json(reg_->find(id).build_decoder(params, t)).dump();
  }
  std::optional<Batch> start_batch(const std::string& id, const json& params, const Column& whole,
                                   const std::vector<Column>& segments) const;
  bool try_add(Batch& batch, const Column& segment) const;
  void finish_batch(const Batch& batch, const std::string& prefix, ColumnFamily& out) const;
  Wire segmentize(CircuitBuilder& b, const json& p, const Part& part, const TypeMap& t, Wire* lengths) const;
  std::vector<std::uint64_t> verify_segments(const json& p, const Part& part, const ColumnFamily& c) const;

  CompositionRecipe recipe_;
  const CodecRegistry* reg_;
};

std::vector<Composer::Part> Composer::parts() const {
  switch (recipe_.kind) {
    case RecipeKind::segmentize_uniform:
    case RecipeKind::segmentize_variable: return {{"inner", "seg_", &recipe_.inner[0]}};
    case RecipeKind::patch: return {{"base", "base_", &recipe_.inner[0]}};
    case RecipeKind::differentiate: return {{"d", "d_", &recipe_.inner[0]}};
    case RecipeKind::small_dict_fit: return {{"residual", "residual_", &recipe_.inner[0]}};
    case RecipeKind::alternate:
    case RecipeKind::elementwise_add:
      return {{"a", "a_", &recipe_.inner[0]}, {"b", "b_", &recipe_.inner[1]}};
  }
  return {};
}

std::optional<SchemeInstance> try_encode(const std::string& id, const json& params, const Column& col,
                                         const CodecRegistry& reg) {
  try {
    auto inst = encode(id, params, col, reg);
    if (!verify(inst, reg)) return std::nullopt;
    return inst;
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Parameters come from encoding the whole column; failing that, from the
// first segment that encodes.
std::optional<Composer::Batch> Composer::start_batch(const std::string& id, const json& params, const Column& whole,
                                                     const std::vector<Column>& segments) const {
  auto ref = try_encode(id, params, whole, *reg_);
  for (std::size_t i = 0; !ref && i < segments.size(); ++i) ref = try_encode(id, params, segments[i], *reg_);
  if (!ref) return std::nullopt;
  Batch b{id, ref->params, "", types_of(ref->columns), {}, 0};
  b.shape = shape_of(id, b.params, b.types);
  return b;
}

bool Composer::try_add(Batch& batch, const Column& segment) const {
  auto inst = try_encode(batch.id, batch.params, segment, *reg_);
  if (!inst || types_of(inst->columns) != batch.types) return false;
  if (shape_of(batch.id, inst->params, batch.types) != batch.shape) return false;
  if (!verify(SchemeInstance{batch.id, batch.params, inst->columns}, *reg_)) return false;
  for (const auto& [label, col] : inst->columns) batch.pieces[label].push_back(col);
  ++batch.segments;
  return true;
}

void Composer::finish_batch(const Batch& batch, const std::string& prefix, ColumnFamily& out) const {
  for (const auto& [label, type] : batch.types) {
    auto it = batch.pieces.find(label);
    std::vector<std::uint64_t> lens;
    Column data = empty_column(type);
    if (it != batch.pieces.end()) {
      for (const auto& c : it->second) lens.push_back(c.size());
      data = concat(it->second);
    }
    out.emplace(prefix + label, data);
    out.emplace(prefix + label + "_seglen", detail::index_column(kU32, lens, "segment lengths"));
  }
}

// Segmentize vertex running the inner decoder once per stored segment.
Wire Composer::segmentize(CircuitBuilder& b, const json& p, const Part& part, const TypeMap& t,
                          Wire* lengths) const {
  TypeMap inner_t;
  for (const auto& [label, type] : strip_prefix(t, part.prefix)) {
    if (label.size() < 7 || label.compare(label.size() - 7, 7, "_seglen") != 0) inner_t.emplace(label, type);
  }
  Circuit dec = inner_entry(part).build_decoder(inner_params(p, part), inner_t);
  std::vector<std::pair<std::string, Wire>> conn;
  for (const auto& port : dec.signature().inputs) {
    const std::string label = part.prefix + port.label;
    auto seglen = t.find(label + "_seglen");
    require(seglen != t.end(), Errc::missing_input, "decoder: no encoded column '" + label + "_seglen'");
    conn.push_back({port.label, b.input(label, port.type)});
    conn.push_back({port.label + "_seglen", b.input(label + "_seglen", seglen->second)});
  }
  auto out = b.add("Segmentize", json{{"inner", circuit_to_json(dec)}, {"length_type", "u32"}}, conn, "segmentize");
  if (lengths) *lengths = out.at(1);
  return out.at(0);
}

// Host check of each stored segment; returns decoded segment lengths.
std::vector<std::uint64_t> Composer::verify_segments(const json& p, const Part& part, const ColumnFamily& c) const {
  ColumnFamily inner = strip_prefix(c, part.prefix);
  std::vector<std::string> labels;
  for (const auto& [label, col] : inner) {
    if (label.size() >= 7 && label.compare(label.size() - 7, 7, "_seglen") == 0) continue;
    check(inner.count(label + "_seglen") == 1, "'" + part.prefix + label + "' has no segment lengths");
    labels.push_back(label);
  }
  check(!labels.empty(), "no encoded columns for '" + part.prefix + "'");
  std::size_t segments = inner.at(labels[0] + "_seglen").size();
  std::map<std::string, std::uint64_t> at;
  for (const auto& label : labels) {
    const Column& lens = inner.at(label + "_seglen");
    check(lens.size() == segments, "segment counts differ");
    check(detail::total_of(lens) == inner.at(label).size(), "segment lengths of '" + label + "' do not add up");
  }
  std::vector<std::uint64_t> decoded;
  json q = inner_params(p, part);
  for (std::size_t s = 0; s < segments; ++s) {
    SchemeInstance seg{part.scheme->scheme_id, q, {}};
    for (const auto& label : labels) {
      std::uint64_t len = inner.at(label + "_seglen").u64(s);
      seg.columns.emplace(label, slice(inner.at(label), at[label], at[label] + len));
      at[label] += len;
    }
    auto v = verify(seg, *reg_);
    check(v.accepted, "segment " + std::to_string(s) + ": " + v.reason);
    decoded.push_back(inner_decode(seg).size());
  }
  return decoded;
}

Circuit Composer::build_decoder(const json& p, const TypeMap& t) const {
  ElementType type = ptype(p, "type", kI64);
  auto ps = parts();
  CircuitBuilder b;
  std::vector<std::pair<Circuit, std::map<std::string, std::string>>> chained;
  auto inner_result = [&](const Part& part) {
    Circuit dec = prefix_labels(inner_decoder(p, part, t), part.prefix);
    Wire w = b.input(part.prefix + "result", output_type(dec, part.prefix + kColumnLabel));
    chained.push_back({dec, {{part.prefix + "result", part.prefix + kColumnLabel}}});
    return w;
  };
  auto type_at = [&](const std::string& label) {
    auto it = t.find(label);
    require(it != t.end(), Errc::missing_input, "decoder: no encoded column '" + label + "'");
    return it->second;
  };
  switch (recipe_.kind) {
    case RecipeKind::segmentize_uniform:
    case RecipeKind::segmentize_variable:
      b.output(kColumnLabel, b.cast(segmentize(b, p, ps[0], t, nullptr), type));
      break;
    case RecipeKind::patch: {
      Wire base = b.cast(inner_result(ps[0]), type);
      b.output(kColumnLabel, b.scatter(base, b.input("patch_pos", type_at("patch_pos")),
                                       b.input("patch_data", type_at("patch_data"))));
      break;
    }
    case RecipeKind::differentiate: {
      Wire first = b.cast(b.input("first", type_at("first")), kI64);
      Wire d = b.cast(inner_result(ps[0]), kI64);
      b.output(kColumnLabel, b.cast(b.prefix_sum(b.concat({first, d})), type));
      break;
    }
    case RecipeKind::elementwise_add: {
      Wire a = b.cast(inner_result(ps[0]), kI64);
      Wire r = b.cast(inner_result(ps[1]), kI64);
      b.output(kColumnLabel, b.cast(b.ew("add", {a, r}), type));
      break;
    }
    case RecipeKind::small_dict_fit: {
      Wire dict = b.input("dictionary", type_at("dictionary"));
      Wire idx = b.input("indices", type_at("indices"));
      Wire miss = b.ew_const("eq", idx, 0);
      Wire found = b.gather(idx, dict);
      Wire residual = b.cast(inner_result(ps[0]), dict.type);
      b.output(kColumnLabel, b.cast(b.scatter(found, b.select_indices(miss), residual), type));
      break;
    }
    case RecipeKind::alternate: {
      auto l = static_cast<std::uint64_t>(param_int(p, "segment_length"));
      std::vector<Wire> pos, vals;
      for (const auto& part : ps) {
        Wire lens;
        vals.push_back(b.cast(segmentize(b, p, part, t, &lens), type));
        Wire segpos = b.cast(b.input("segpos_" + part.key, type_at("segpos_" + part.key)), kU64);
        pos.push_back(detail::expand_ranges(b, b.ew("scale", {segpos}, json{{"k", l}}), lens).first);
      }
      b.output(kColumnLabel, b.permute(b.concat(pos), b.concat(vals)));
      break;
    }
  }
  Circuit c = b.build();
  for (const auto& [inner, links] : chained) c = chain_circuits(c, inner, links);
  return c;
}

std::uint64_t segment_length_param(const json& v) {
  require(v.is_number_integer() && v.get<std::int64_t>() >= 1, Errc::invalid_argument,
          "segment_length must be a positive integer");
  return v.get<std::uint64_t>();
}

std::vector<Column> uniform_segments(const Column& col, std::uint64_t l) {
  std::vector<Column> out;
  for (std::size_t s = 0; s < col.size(); s += l) out.push_back(slice(col, s, std::min<std::size_t>(col.size(), s + l)));
  return out;
}

// Number of distinct values to keep in a dictionary of 2^bits - 1 entries
// (entry 0 is reserved), chosen by estimated size.
int choose_bits(const FrequencyTable& freq, std::size_t n, std::size_t width) {
  std::vector<std::uint64_t> counts;
  for (const auto& [v, c] : freq.entries) counts.push_back(c);
  std::sort(counts.rbegin(), counts.rend());
  int best = 1;
  double best_cost = -1;
  for (int bits = 1; bits <= 16; ++bits) {
    std::size_t cap = (std::size_t{1} << bits) - 1;
    std::size_t kept = std::min(cap, counts.size());
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < kept; ++i) covered += counts[i];
    double cost = n * bits / 8.0 + static_cast<double>(kept + 1) * width + static_cast<double>(n - covered) * width;
    if (best_cost < 0 || cost < best_cost) best = bits, best_cost = cost;
    if (kept == counts.size()) break;
  }
  return best;
}

SchemeInstance Composer::encode_column(const json& p, const Column& col) const {
  auto ps = parts();
  ElementType type = col.type();
  SchemeInstance out{"", json{{"type", type.to_string()}}, {}};
  switch (recipe_.kind) {
    case RecipeKind::segmentize_uniform:
    case RecipeKind::segmentize_variable: {
      bool uniform = recipe_.kind == RecipeKind::segmentize_uniform;
      const std::string& id = ps[0].scheme->scheme_id;
      json q = inner_params(p, ps[0]);
      std::vector<Column> segs;
      std::uint64_t l = 0;
      if (uniform) {
        l = segment_length_param(recipe_param(p, "segment_length", 128));
        segs = uniform_segments(col, l);
        out.params["segment_length"] = l;
      } else {
        segs = {col.empty() ? col : slice(col, 0, 1)};
      }
      auto batch = start_batch(id, q, col, segs);
      if (!batch) not_encodable("'" + id + "' encodes no segment");
      if (uniform) {
        for (std::size_t s = 0; s < segs.size(); ++s) {
          if (!try_add(*batch, segs[s])) not_encodable("segment " + std::to_string(s) + " does not encode uniformly");
        }
      } else {
        // Longest encodable segment from each start: doubling, then bisection.
        for (std::size_t s = 0; s < col.size();) {
          if (!try_encode(id, batch->params, slice(col, s, s + 1), *reg_)) {
            not_encodable("element " + std::to_string(s) + " does not encode alone");
          }
          auto fits = [&](std::size_t len) {
            Batch probe = *batch;
            return try_add(probe, slice(col, s, s + len));
          };
          std::size_t good = 1, bad = 0;
          for (std::size_t len = 2; s + len <= col.size(); len *= 2) {
            if (!fits(len)) {
              bad = len;
              break;
            }
            good = len;
          }
          if (bad == 0 && s + good < col.size() && fits(col.size() - s)) good = col.size() - s;
          if (bad == 0) bad = std::min(col.size() - s + 1, good * 2);
          while (bad - good > 1) {
            std::size_t mid = good + (bad - good) / 2;
            (fits(mid) ? good : bad) = mid;
          }
          if (!try_add(*batch, slice(col, s, s + good))) not_encodable("segment at " + std::to_string(s) + " failed");
          s += good;
        }
      }
      out.params[ps[0].key] = batch->params;
      finish_batch(*batch, ps[0].prefix, out.columns);
      return out;
    }
    case RecipeKind::patch: {
      SchemeInstance base = approximate(p, ps[0], col);
      Column approx = inner_decode(base);
      require(approx.size() == col.size(), Errc::not_encodable, "base decodes to the wrong length");
      std::vector<std::size_t> at;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (approx.value(i) != col.value(i)) at.push_back(i);
      }
      std::vector<std::uint64_t> pos(at.begin(), at.end());
      ElementType pt = ptype(p, "pos_type", kU32);
      out.params["pos_type"] = pt.to_string();
      out.params[ps[0].key] = base.params;
      add_prefixed(out.columns, ps[0].prefix, base.columns);
      out.columns.emplace("patch_pos", detail::index_column(pt, pos, "patch_pos"));
      out.columns.emplace("patch_data", take(col, at));
      return out;
    }
    case RecipeKind::differentiate: {
      auto v = integers_of(col);
      std::vector<i128> d;
      for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
      auto inner = encode(ps[0].scheme->scheme_id, inner_params(p, ps[0]), i64_column(d, "differences"), *reg_);
      out.params[ps[0].key] = inner.params;
      add_prefixed(out.columns, ps[0].prefix, inner.columns);
      out.columns.emplace("first", slice(col, 0, std::min<std::size_t>(1, col.size())));
      return out;
    }
    case RecipeKind::elementwise_add: {
      auto v = integers_of(col);
      SchemeInstance a = approximate(p, ps[0], col);
      Column approx = inner_decode(a);
      require(approx.size() == col.size() && approx.type().is_integer(), Errc::not_encodable,
              "approximation decodes to the wrong length or type");
      std::vector<i128> r(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - approx.integer(i);
      auto residual = encode(ps[1].scheme->scheme_id, inner_params(p, ps[1]), i64_column(r, "residual"), *reg_);
      out.params[ps[0].key] = a.params;
      out.params[ps[1].key] = residual.params;
      add_prefixed(out.columns, ps[0].prefix, a.columns);
      add_prefixed(out.columns, ps[1].prefix, residual.columns);
      return out;
    }
    case RecipeKind::small_dict_fit: {
      auto freq = frequency_distribution(col);
      int bits = p.contains("bits") ? static_cast<int>(param_int(p, "bits"))
                                    : choose_bits(freq, col.size(), type.byte_width());
      require(bits >= 1 && bits <= 32, Errc::invalid_argument, "bits must be in 1..32");
      // Most frequent first, ties by value.
      std::vector<std::pair<std::uint64_t, Value>> ranked;
      for (const auto& [v, c] : freq.entries) ranked.push_back({c, v});
      std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
      ranked.resize(std::min(ranked.size(), (std::size_t{1} << bits) - 1));
      std::map<Value, std::uint64_t> code;
      std::vector<Value> dict{detail::zero_scalar(type).value(0)};
      for (const auto& [c, v] : ranked) {
        code.emplace(v, dict.size());
        dict.push_back(v);
      }
      std::vector<std::uint64_t> idx;
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < col.size(); ++i) {
        auto it = code.find(col.value(i));
        idx.push_back(it == code.end() ? 0 : it->second);
        if (it == code.end()) rest.push_back(i);
      }
      auto residual = encode(ps[0].scheme->scheme_id, inner_params(p, ps[0]), take(col, rest), *reg_);
      out.params["bits"] = bits;
      out.params[ps[0].key] = residual.params;
      out.columns.emplace("dictionary", Column::from_values(type, dict));
      out.columns.emplace("indices", detail::index_column(ElementType::u(bits), idx, "indices"));
      add_prefixed(out.columns, ps[0].prefix, residual.columns);
      return out;
    }
    case RecipeKind::alternate: {
      auto l = segment_length_param(recipe_param(p, "segment_length", 128));
      auto segs = uniform_segments(col, l);
      std::vector<std::optional<Batch>> batches;
      for (const auto& part : ps) batches.push_back(start_batch(part.scheme->scheme_id, inner_params(p, part), col, segs));
      std::vector<std::vector<std::uint64_t>> segpos(ps.size());
      for (std::size_t s = 0; s < segs.size(); ++s) {
        std::optional<std::size_t> pick;
        std::uint64_t best = 0;
        for (std::size_t k = 0; k < ps.size(); ++k) {
          if (!batches[k]) continue;
          Batch probe = *batches[k];
          if (!try_add(probe, segs[s])) continue;
          ColumnFamily last;
          for (const auto& [label, pieces] : probe.pieces) last.emplace(label, pieces.back());
          std::uint64_t size = representation_size_bytes(last);
          if (!pick || size < best) pick = k, best = size;
        }
        if (!pick) not_encodable("segment " + std::to_string(s) + " fits neither scheme");
        try_add(*batches[*pick], segs[s]);
        segpos[*pick].push_back(s);
      }
      out.params["segment_length"] = l;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        if (!batches[k]) {
          // Unused side: still needs typed columns for the decoder.
          auto ref = encode(ps[k].scheme->scheme_id, inner_params(p, ps[k]), empty_column(type), *reg_);
          batches[k] = Batch{ref.scheme_id, ref.params, "", types_of(ref.columns), {}, 0};
        }
        out.params[ps[k].key] = batches[k]->params;
        finish_batch(*batches[k], ps[k].prefix, out.columns);
        out.columns.emplace("segpos_" + ps[k].key, detail::index_column(kU32, segpos[k], "segment positions"));
      }
      return out;
    }
  }
  return out;
}

void Composer::verify_structure(const json& p, const ColumnFamily& c) const {
  auto ps = parts();
  ElementType type = ptype(p, "type", kI64);
  std::set<std::string> own;
  switch (recipe_.kind) {
    case RecipeKind::segmentize_uniform:
    case RecipeKind::segmentize_variable: {
      auto lens = verify_segments(p, ps[0], c);
      if (recipe_.kind == RecipeKind::segmentize_uniform) {
        std::uint64_t l = segment_length_param(p.value("segment_length", json()));
        for (std::size_t s = 0; s < lens.size(); ++s) {
          bool last = s + 1 == lens.size();
          check(last ? lens[s] >= 1 && lens[s] <= l : lens[s] == l,
                "segment " + std::to_string(s) + " decodes to " + std::to_string(lens[s]) + " elements");
        }
      } else {
        for (auto n : lens) check(n >= 1, "empty segment");
      }
      break;
    }
    case RecipeKind::alternate: {
      std::uint64_t l = segment_length_param(p.value("segment_length", json()));
      std::vector<std::pair<std::uint64_t, std::uint64_t>> segs;  // (position, decoded length)
      for (const auto& part : ps) {
        const Column& pos = detail::need(c, "segpos_" + part.key);
        detail::expect_index_type(pos, "segpos_" + part.key);
        auto lens = verify_segments(p, part, c);
        check(lens.size() == pos.size(), "segment positions and segments differ in count");
        for (std::size_t s = 0; s < lens.size(); ++s) segs.push_back({pos.u64(s), lens[s]});
        own.insert("segpos_" + part.key);
      }
      std::sort(segs.begin(), segs.end());
      for (std::size_t s = 0; s < segs.size(); ++s) {
        check(segs[s].first == s, "segment positions are not 0..count-1 exactly once");
        bool last = s + 1 == segs.size();
        check(last ? segs[s].second >= 1 && segs[s].second <= l : segs[s].second == l,
              "segment " + std::to_string(s) + " has the wrong length");
      }
      break;
    }
    case RecipeKind::patch: {
      check(detail::strictly_increasing(detail::need(c, "patch_pos")), "patch positions must increase");
      detail::need_typed(c, "patch_data", type);
      own = {"patch_pos", "patch_data"};
      break;
    }
    case RecipeKind::differentiate: {
      const Column& first = detail::need_typed(c, "first", type);
      check(first.size() <= 1, "at most one first value");
      own = {"first"};
      break;
    }
    case RecipeKind::elementwise_add: break;
    case RecipeKind::small_dict_fit: {
      auto bits = param_int(p, "bits");
      check(bits >= 1 && bits <= 32, "bits must be in 1..32");
      const Column& dict = detail::need_typed(c, "dictionary", type);
      const Column& idx = detail::need_typed(c, "indices", ElementType::u(static_cast<int>(bits)));
      check(dict.size() >= 1 && dict.size() <= (std::uint64_t{1} << bits), "dictionary size out of range");
      for (std::size_t i = 0; i < idx.size(); ++i) check(idx.u64(i) < dict.size(), "index beyond the dictionary");
      own = {"dictionary", "indices"};
      break;
    }
  }
  bool segmented = recipe_.kind == RecipeKind::segmentize_uniform ||
                   recipe_.kind == RecipeKind::segmentize_variable || recipe_.kind == RecipeKind::alternate;
  for (const auto& [label, col] : c) {
    bool known = own.count(label) != 0;
    for (const auto& part : ps) known = known || label.rfind(part.prefix, 0) == 0;
    check(known, "unexpected column '" + label + "'");
  }
  if (!segmented) {
    for (const auto& part : ps) {
      auto v = verify(inner_instance(p, part, c), *reg_);
      check(v.accepted, part.key + ": " + v.reason);
    }
  }
  if (recipe_.kind == RecipeKind::differentiate && detail::need(c, "first").size() == 0) {
    check(inner_decode(inner_instance(p, ps[0], c)).size() == 0, "differences without a first value");
  }
  // Remaining conditions (lengths, ranges, overflow) by running the decoder.
  evaluate_circuit(build_decoder(p, types_of(c)), c);
}

CodecEntry Composer::entry() const {
  CodecEntry e;
  e.scheme_id = recipe_.scheme_id;
  std::string inner = recipe_.inner[0].scheme_id;
  if (recipe_.inner.size() > 1) inner += ", " + recipe_.inner[1].scheme_id;
  e.summary = "composed from " + inner;
  e.param_schema = {{"type", "decoded type (set by the encoder)"}};
  for (const auto& part : parts()) e.param_schema[part.key] = "parameters of " + part.scheme->scheme_id;
  auto self = std::make_shared<Composer>(*this);
  e.build_decoder = [self](const json& p, const TypeMap& t) { return self->build_decoder(p, t); };
  e.encode = [self](const json& p, const ColumnFamily& in) {
    return self->encode_column(p, detail::input_column(in));
  };
  e.verify = [self](const json& p, const ColumnFamily& c) {
    self->verify_structure(p, c);
    return VerifyResult::accept();
  };
  return e;
}

}  // namespace

namespace {

// Every recipe treats its inner schemes as codecs of one "column". Probes the
// encoder with a one-element column; an encoder that wants other inputs, or a
// decoder with other outputs, is incompatible. Encoders that fail for other
// reasons (product columns only, say) are given the benefit of the doubt.
void require_single_column(const InnerScheme& inner, const CodecRegistry& registry) {
  const CodecEntry& e = registry.find(inner.scheme_id);
  ColumnFamily probe{{kColumnLabel, Column::from_u64(ElementType::u(32), {0})}};
  SchemeInstance inst;
  try {
    inst = e.encode(inner.params, probe);
  } catch (const Error& err) {
    require(err.code() != Errc::missing_input, Errc::incompatible_schemes,
            "scheme '" + inner.scheme_id + "' does not encode a single column: " + err.what());
    return;
  }
  Circuit dec = e.build_decoder(inst.params, types_of(inst.columns));
  require(dec.outputs().size() == 1 && dec.outputs().count(kColumnLabel), Errc::incompatible_schemes,
          "scheme '" + inner.scheme_id + "' does not decode to a single column");
}

}  // namespace

CodecEntry compose(const CompositionRecipe& recipe, const CodecRegistry& registry) {
  require(!recipe.scheme_id.empty(), Errc::invalid_argument, "composed scheme needs an id");
  for (const auto& inner : recipe.inner) {
    require(registry.contains(inner.scheme_id), Errc::unknown_scheme, "unknown scheme '" + inner.scheme_id + "'");
    require_single_column(inner, registry);
  }
  return Composer(recipe, &registry).entry();
}

namespace detail {

void register_composed_schemes(CodecRegistry& reg) {
  reg.register_codec(compose({RecipeKind::elementwise_add, "noisy.generated",
                              {{"generated.poly", json{{"degree", 1}}}, {"nullsup", json::object()}}},
                             reg));
  reg.register_codec(compose({RecipeKind::small_dict_fit, "subdict", {{"nullsup", json::object()}}}, reg));
}

}  // namespace detail

}  // namespace colcirc
