// Structural (non-compressing) schemes.

#include <algorithm>
#include <map>
#include <numeric>

#include "colcirc/ops.hpp"
#include "colcirc/schemes.hpp"
#include "scheme_support.hpp"

namespace colcirc::detail {

namespace {

const ElementType kBit = ElementType::bit();

ElementType type_at(const TypeMap& t, const std::string& label) {
  auto it = t.find(label);
  require(it != t.end(), Errc::missing_input, "decoder: no encoded column '" + label + "'");
  return it->second;
}

ColumnFamily canonical_subcolumn_family(const ColumnFamily& f) {
  return canonical_subcolumn(Subcolumn::from(f)).family();
}

void check_subcolumn(const Column& pos, const Column& data, const std::string& what) {
  check(pos.size() == data.size(), what + ": pos and data lengths differ");
  expect_index_type(pos, what + " pos");
  std::vector<std::uint64_t> p = indices_of(pos);
  std::sort(p.begin(), p.end());
  check(std::adjacent_find(p.begin(), p.end()) == p.end(), what + ": repeated position");
}

Wire ones_like(CircuitBuilder& b, const Wire& like) {
  return broadcast(b, b.constant(kBit, 1), like);
}

Wire zero_bits(CircuitBuilder& b, const Wire& n) {
  return b.replicate(b.constant(kBit, 0), b.cast(n, kU64));
}

Wire marks_at(CircuitBuilder& b, const Wire& n, const Wire& pos) {
  return b.scatter(zero_bits(b, n), pos, ones_like(b, pos));
}

// ---------------------------------------------------------------- indexed

void register_indexed(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "indexed";
  e.summary = "column given as a permutation of its elements: out[pos[i]] = data[i]";
  e.param_schema = {{"pos_type", "integer type of pos (default u32)"}};
  e.build_decoder = [](const json&, const TypeMap& t) {
    CircuitBuilder b;
    auto pos = b.input("pos", type_at(t, "pos"));
    auto data = b.input("data", type_at(t, "data"));
    b.output(kColumnLabel, b.permute(pos, data));
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    const Column& col = input_column(in);
    ElementType pt = ptype(p, "pos_type", kU32);
    std::vector<std::uint64_t> pos(col.size());
    std::iota(pos.begin(), pos.end(), 0);
    return SchemeInstance{"", json{{"pos_type", pt.to_string()}},
                          {{"pos", index_column(pt, pos, "pos")}, {"data", col}}};
  };
  e.verify = [](const json&, const ColumnFamily& c) {
    expect_labels(c, {"pos", "data"});
    const Column& pos = need(c, "pos");
    check(pos.type().is_integer(), "pos must be an integer column");
    check(pos.size() == need(c, "data").size(), "pos and data lengths differ");
    check(ops::is_permutation(pos), "pos is not a permutation of 0..n-1");
    return VerifyResult::accept();
  };
  reg.register_codec(std::move(e));
}

// ------------------------------------------------------------- subcolumns

void register_subcolumn_std(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "subcolumn.std";
  e.summary = "subcolumn as distinct positions with data, in any order";
  e.build_decoder = [](const json&, const TypeMap& t) {
    CircuitBuilder b;
    auto [pos, data] = sort_subcolumn(b, b.input("unordered_pos", type_at(t, "unordered_pos")),
                                      b.input("unordered_data", type_at(t, "unordered_data")));
    b.output("pos", pos);
    b.output("data", data);
    return b.build();
  };
  e.encode = [](const json&, const ColumnFamily& in) {
    require(in.size() == 2 && in.count("pos") && in.count("data"), Errc::missing_input,
            "expected columns 'pos' and 'data'");
    Subcolumn sc = Subcolumn::from(in);
    try {
      sc = canonical_subcolumn(sc);
    } catch (const Error& err) {
      not_encodable(err.what());
    }
    return SchemeInstance{"", json::object(), {{"unordered_pos", sc.pos}, {"unordered_data", sc.data}}};
  };
  e.verify = [](const json&, const ColumnFamily& c) {
    expect_labels(c, {"unordered_pos", "unordered_data"});
    check_subcolumn(need(c, "unordered_pos"), need(c, "unordered_data"), "subcolumn");
    return VerifyResult::accept();
  };
  e.canonicalize = canonical_subcolumn_family;
  reg.register_codec(std::move(e));
}

// Overlay of (pos1, data1) by (pos2, data2); with `disjoint` the first is
// taken whole.
Circuit pair_decoder(const TypeMap& t, bool disjoint) {
  CircuitBuilder b;
  auto p1 = b.input("pos1", type_at(t, "pos1"));
  auto d1 = b.input("data1", type_at(t, "data1"));
  auto p2 = b.input("pos2", type_at(t, "pos2"));
  auto d2 = b.input("data2", type_at(t, "data2"));
  if (!disjoint) {
    Wire span = scalar_op(b, "max", span_of(b, p1), span_of(b, p2));
    Wire covered = b.gather(p1, marks_at(b, span, p2));
    Wire keep = b.ew("not", {covered});
    p1 = b.select(p1, keep);
    d1 = b.select(d1, keep);
  }
  auto [pos, data] = sort_subcolumn(b, b.concat({p1, p2}), b.concat({d1, d2}));
  b.output("pos", pos);
  b.output("data", data);
  return b.build();
}

void check_pair(const ColumnFamily& c) {
  expect_labels(c, {"pos1", "data1", "pos2", "data2"});
  check(need(c, "pos1").type() == need(c, "pos2").type(), "position types differ");
  check(need(c, "data1").type() == need(c, "data2").type(), "data types differ");
  check_subcolumn(need(c, "pos1"), need(c, "data1"), "first subcolumn");
  check_subcolumn(need(c, "pos2"), need(c, "data2"), "second subcolumn");
}

SchemeInstance encode_pair(const ColumnFamily& in) {
  require(in.size() == 2 && in.count("pos") && in.count("data"), Errc::missing_input,
            "expected columns 'pos' and 'data'");
  Subcolumn sc;
  try {
    sc = canonical_subcolumn(Subcolumn::from(in));
  } catch (const Error& err) {
    not_encodable(err.what());
  }
  // Canonical split: alternate elements between the two halves.
  std::vector<std::size_t> a, b;
  for (std::size_t i = 0; i < sc.pos.size(); ++i) (i % 2 == 0 ? a : b).push_back(i);
  return SchemeInstance{"", json::object(),
                        {{"pos1", take(sc.pos, a)},
                         {"data1", take(sc.data, a)},
                         {"pos2", take(sc.pos, b)},
                         {"data2", take(sc.data, b)}}};
}

void register_subcolumn_pairs(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "subcolumn.overlay";
    e.summary = "overlay of subcolumn 1 by subcolumn 2";
    e.build_decoder = [](const json&, const TypeMap& t) { return pair_decoder(t, false); };
    e.encode = [](const json&, const ColumnFamily& in) { return encode_pair(in); };
    e.verify = [](const json&, const ColumnFamily& c) {
      check_pair(c);
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_subcolumn_family;
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "subcolumn.union.disjoint";
    e.summary = "union of two subcolumns with disjoint domains";
    e.build_decoder = [](const json&, const TypeMap& t) { return pair_decoder(t, true); };
    e.encode = [](const json&, const ColumnFamily& in) { return encode_pair(in); };
    e.verify = [](const json&, const ColumnFamily& c) {
      check_pair(c);
      auto all = indices_of(ops::concatenate({need(c, "pos1"), need(c, "pos2")}));
      std::sort(all.begin(), all.end());
      check(std::adjacent_find(all.begin(), all.end()) == all.end(), "subcolumn domains overlap");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_subcolumn_family;
    reg.register_codec(std::move(e));
  }
}

// ------------------------------------------------------- full-column pairs

void register_column_pairs(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "column.complementing";
    e.summary = "data1 at pos, data2 at the remaining indices in increasing order";
    e.param_schema = {{"pos_type", "integer type of pos (default u32)"}};
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto pos = b.input("pos", type_at(t, "pos"));
      auto d1 = b.input("data1", type_at(t, "data1"));
      auto d2 = b.input("data2", type_at(t, "data2"));
      Wire n = scalar_op(b, "add", b.length(d1), b.length(d2));
      Wire rest = b.select_indices(b.ew("not", {marks_at(b, n, pos)}), pos.type);
      b.output(kColumnLabel, b.permute(b.concat({pos, rest}), b.concat({d1, d2})));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = need(in, kColumnLabel);
      ElementType pt = ptype(p, "pos_type", kU32);
      std::vector<bool> first(col.size());
      if (in.count("selection")) {
        const Column& sel = need(in, "selection");
        require(sel.type().is_bit() && sel.size() == col.size() && in.size() == 2,
                Errc::invalid_argument, "selection must be a bit column as long as the column");
        for (std::size_t i = 0; i < col.size(); ++i) first[i] = sel.bit(i);
      } else {
        require(in.size() == 1, Errc::invalid_argument, "unexpected input columns");
        // Elements differing from the most frequent value go first.
        auto freq = frequency_distribution(col);
        Value mode;
        std::uint64_t best = 0;
        for (const auto& [v, count] : freq.entries) {
          if (count > best) best = count, mode = v;
        }
        for (std::size_t i = 0; i < col.size(); ++i) first[i] = !(col.value(i) == mode);
      }
      std::vector<std::size_t> a, b;
      std::vector<std::uint64_t> pos;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (first[i]) a.push_back(i), pos.push_back(i);
        else b.push_back(i);
      }
      return SchemeInstance{"", json{{"pos_type", pt.to_string()}},
                            {{"pos", index_column(pt, pos, "pos")},
                             {"data1", take(col, a)},
                             {"data2", take(col, b)}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"pos", "data1", "data2"});
      const Column& pos = need(c, "pos");
      check(pos.type().is_integer(), "pos must be integers");
      check(need(c, "data1").type() == need(c, "data2").type(), "data types differ");
      check(pos.size() == need(c, "data1").size(), "pos and data1 lengths differ");
      std::uint64_t n = need(c, "data1").size() + need(c, "data2").size();
      check(distinct_below(pos, n), "pos values must be distinct and below " + std::to_string(n));
      return VerifyResult::accept();
    };
    e.canonicalize = [](const ColumnFamily& f) {
      return ColumnFamily{{kColumnLabel, need(f, kColumnLabel)}};
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "column.overlaid";
    e.summary = "main column patched by a subcolumn (scatter)";
    e.param_schema = {{"type", "decoded element type"},
                      {"data_type", "main column type; may be narrower (default: type)"},
                      {"pos_type", "integer type of overlay_pos (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      ElementType out = ptype(p, "type", type_at(t, "overlay_data"));
      auto data = b.input("data", type_at(t, "data"));
      auto pos = b.input("overlay_pos", type_at(t, "overlay_pos"));
      auto od = b.input("overlay_data", type_at(t, "overlay_data"));
      b.output(kColumnLabel, b.scatter(b.cast(data, out), pos, od));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      ElementType t = col.type();
      ElementType dt = ptype(p, "data_type", t);
      ElementType pt = ptype(p, "pos_type", kU32);
      require(dt == t || (dt.is_integer() && t.is_integer()), Errc::invalid_argument,
              "data_type must equal type unless both are integer");
      ColumnBuilder data(dt, col.size());
      std::vector<std::size_t> patched;
      std::vector<std::uint64_t> pos;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (dt == t) {
          data.push_from(col, i);
        } else if (dt.contains(col.integer(i))) {
          data.push_int(col.integer(i));
        } else {
          data.push_int(0);
          patched.push_back(i);
          pos.push_back(i);
        }
      }
      return SchemeInstance{
          "",
          json{{"type", t.to_string()}, {"data_type", dt.to_string()}, {"pos_type", pt.to_string()}},
          {{"data", data.finish()},
           {"overlay_pos", index_column(pt, pos, "overlay_pos")},
           {"overlay_data", take(col, patched)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"data", "overlay_pos", "overlay_data"});
      const Column& data = need(c, "data");
      const Column& od = need(c, "overlay_data");
      ElementType t = ptype(p, "type", od.type());
      check(od.type() == t, "overlay_data type differs from decoded type");
      check(data.type() == ptype(p, "data_type", t), "data type differs from data_type");
      check(need(c, "overlay_pos").size() == od.size(), "overlay lengths differ");
      check(need(c, "overlay_pos").type().is_integer(), "overlay_pos must be integers");
      check(distinct_below(need(c, "overlay_pos"), data.size()),
            "overlay positions must be distinct and inside the column");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ----------------------------------------------------------- segmentations

// Segment id of every element from run lengths.
std::vector<std::uint64_t> runs_of_segment_ids(const Column& seg, const std::string& what) {
  std::vector<std::uint64_t> lengths;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    i128 v = seg.integer(i);
    i128 expect_same = lengths.empty() ? -1 : static_cast<i128>(lengths.size() - 1);
    if (v == expect_same) {
      ++lengths.back();
    } else if (v == expect_same + 1) {
      lengths.push_back(1);
    } else {
      not_encodable(what + ": segment ids must start at 0 and grow by 0 or 1 (index " +
                    std::to_string(i) + ")");
    }
  }
  return lengths;
}

void check_chain(const Column& start, const Column& length, const std::string& what) {
  check(start.size() == length.size(), what + ": start and length differ in count");
  expect_index_type(start, what + " start");
  expect_index_type(length, what + " length");
  for (std::size_t i = 0; i < start.size(); ++i) {
    std::uint64_t want = i == 0 ? 0 : start.u64(i - 1) + length.u64(i - 1);
    check(start.u64(i) == want, what + ": segment " + std::to_string(i) + " starts at " +
                                    std::to_string(start.u64(i)) + ", expected " +
                                    std::to_string(want) + " (gap or overlap)");
  }
}

std::uint64_t uniform_segment_length(const Column& seg) {
  if (seg.size() == 0) return 1;
  std::uint64_t l = 0;
  while (l < seg.size() && seg.integer(l) == 0) ++l;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (seg.integer(i) != static_cast<i128>(i / l)) {
      not_encodable("segment ids are not a uniform segmentation (index " + std::to_string(i) + ")");
    }
  }
  return l;
}

Wire segment_ids(CircuitBuilder& b, const Wire& lengths, const ElementType& t) {
  return b.cast(b.expand_runs(lengths), t);
}

void register_segmentations(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "segmentation";
    e.summary = "gap-free segments by start and length; decodes to each element's segment id";
    e.param_schema = {{"type", "segment id type (default u32)"},
                      {"index_type", "start/length type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      b.input("start", type_at(t, "start"));
      auto len = b.input("length", type_at(t, "length"));
      b.output("segment_of", segment_ids(b, len, ptype(p, "type", kU32)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& seg = need(in, "segment_of");
      require(in.size() == 1, Errc::invalid_argument, "expected a single 'segment_of' column");
      ElementType it = ptype(p, "index_type", kU32);
      auto lengths = runs_of_segment_ids(seg, "segmentation");
      std::vector<std::uint64_t> starts(lengths.size());
      std::exclusive_scan(lengths.begin(), lengths.end(), starts.begin(), std::uint64_t{0});
      return SchemeInstance{"", json{{"type", seg.type().to_string()}, {"index_type", it.to_string()}},
                            {{"start", index_column(it, starts, "start")},
                             {"length", index_column(it, lengths, "length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"start", "length"});
      check_chain(need(c, "start"), need(c, "length"), "segmentation");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "segmentation.uniform";
    e.summary = "segments of one length over a column of overall_length elements";
    e.param_schema = {{"type", "segment id type (default u32)"},
                      {"index_type", "scalar type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto l = b.input("segment_length", type_at(t, "segment_length"));
      auto n = b.input("overall_length", type_at(t, "overall_length"));
      auto [q, r] = div_mod_index(b, n, l);
      (void)r;
      b.output("segment_of", b.cast(q, ptype(p, "type", kU32)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& seg = need(in, "segment_of");
      require(in.size() == 1, Errc::invalid_argument, "expected a single 'segment_of' column");
      ElementType it = ptype(p, "index_type", kU32);
      std::uint64_t l = uniform_segment_length(seg);
      return SchemeInstance{"", json{{"type", seg.type().to_string()}, {"index_type", it.to_string()}},
                            {{"segment_length", scalar_of(it, l, "segment_length")},
                             {"overall_length", scalar_of(it, seg.size(), "overall_length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"segment_length", "overall_length"});
      check(need_scalar(c, "segment_length") >= 1, "segment_length must be positive");
      need_scalar(c, "overall_length");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "segmented";
    e.summary = "column with a variable-length segmentation";
    e.param_schema = {{"type", "segment id type (default u32)"},
                      {"index_type", "start/length type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto data = b.input("data", type_at(t, "data"));
      b.input("segment_start_pos", type_at(t, "segment_start_pos"));
      auto len = b.input("segment_length", type_at(t, "segment_length"));
      b.output(kColumnLabel, data);
      b.output("segment_of", segment_ids(b, len, ptype(p, "type", kU32)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = need(in, kColumnLabel);
      const Column& seg = need(in, "segment_of");
      require(in.size() == 2 && seg.size() == col.size(), Errc::invalid_argument,
              "expected 'column' and an equally long 'segment_of'");
      ElementType it = ptype(p, "index_type", kU32);
      auto lengths = runs_of_segment_ids(seg, "segmented");
      std::vector<std::uint64_t> starts(lengths.size());
      std::exclusive_scan(lengths.begin(), lengths.end(), starts.begin(), std::uint64_t{0});
      return SchemeInstance{"", json{{"type", seg.type().to_string()}, {"index_type", it.to_string()}},
                            {{"data", col},
                             {"segment_start_pos", index_column(it, starts, "segment_start_pos")},
                             {"segment_length", index_column(it, lengths, "segment_length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"data", "segment_start_pos", "segment_length"});
      check_chain(need(c, "segment_start_pos"), need(c, "segment_length"), "segmented");
      check(total_of(need(c, "segment_length")) == need(c, "data").size(),
            "segment lengths do not cover the data");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "segmented.uniform";
    e.summary = "column with a uniform segment length";
    e.param_schema = {{"type", "segment id type (default u32)"},
                      {"index_type", "segment_length type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      auto data = b.input("data", type_at(t, "data"));
      auto l = b.input("segment_length", type_at(t, "segment_length"));
      auto [q, r] = div_mod_index(b, b.length(data), l);
      (void)r;
      b.output(kColumnLabel, data);
      b.output("segment_of", b.cast(q, ptype(p, "type", kU32)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = need(in, kColumnLabel);
      const Column& seg = need(in, "segment_of");
      require(in.size() == 2 && seg.size() == col.size(), Errc::invalid_argument,
              "expected 'column' and an equally long 'segment_of'");
      ElementType it = ptype(p, "index_type", kU32);
      std::uint64_t l = uniform_segment_length(seg);
      return SchemeInstance{"", json{{"type", seg.type().to_string()}, {"index_type", it.to_string()}},
                            {{"data", col}, {"segment_length", scalar_of(it, l, "segment_length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"data", "segment_length"});
      check(need_scalar(c, "segment_length") >= 1, "segment_length must be positive");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ------------------------------------------------------ segmented subcolumn

void register_segmented_subcolumn(CodecRegistry& reg) {
  CodecEntry e;
  e.scheme_id = "subcolumn.segmented";
  e.summary = "subcolumn made of whole l-segments at the given segment positions";
  e.param_schema = {{"segment_length", "segment length l (encoder, required)"}};
  e.build_decoder = [](const json&, const TypeMap& t) {
    CircuitBuilder b;
    auto l = b.input("segment_length", type_at(t, "segment_length"));
    auto sp = b.input("segment_pos", type_at(t, "segment_pos"));
    auto data = b.input("segment_data", type_at(t, "segment_data"));
    Wire l64 = b.cast(l, kU64);
    auto [q, r] = div_mod_index(b, b.length(data), l64);
    Wire seg = b.cast(b.gather(q, sp), kU64);
    Wire first = b.ew("mul", {seg, broadcast(b, l64, seg)});
    Wire pos = b.cast(b.ew("add", {first, r}), sp.type);
    auto [spos, sdata] = sort_subcolumn(b, pos, data);
    b.output("pos", spos);
    b.output("data", sdata);
    return b.build();
  };
  e.encode = [](const json& p, const ColumnFamily& in) {
    require(p.contains("segment_length"), Errc::invalid_argument, "segment_length is required");
    std::uint64_t l = static_cast<std::uint64_t>(param_int(p, "segment_length"));
    require(l >= 1, Errc::invalid_argument, "segment_length must be positive");
    require(in.size() == 2 && in.count("pos") && in.count("data"), Errc::missing_input,
            "expected columns 'pos' and 'data'");
    Subcolumn sc;
    try {
      sc = canonical_subcolumn(Subcolumn::from(in));
    } catch (const Error& err) {
      not_encodable(err.what());
    }
    auto pos = indices_of(sc.pos);
    std::vector<std::uint64_t> segs;
    for (std::size_t i = 0; i < pos.size();) {
      std::uint64_t block = pos[i] / l;
      require(pos[i] % l == 0, Errc::not_encodable,
              "position " + std::to_string(pos[i]) + " does not start a segment");
      std::size_t j = i;
      while (j < pos.size() && pos[j] / l == block) {
        if (pos[j] != block * l + (j - i)) not_encodable("segment " + std::to_string(block) + " has a hole");
        ++j;
      }
      if (j - i < l && j != pos.size()) {
        not_encodable("only the last segment may be short (segment " + std::to_string(block) + ")");
      }
      segs.push_back(block);
      i = j;
    }
    ElementType pt = sc.pos.type();
    return SchemeInstance{"", json{{"segment_length", l}},
                          {{"segment_length", scalar_of(pt, l, "segment_length")},
                           {"segment_pos", index_column(pt, segs, "segment_pos")},
                           {"segment_data", sc.data}}};
  };
  e.verify = [](const json&, const ColumnFamily& c) {
    expect_labels(c, {"segment_length", "segment_pos", "segment_data"});
    std::uint64_t l = need_scalar(c, "segment_length");
    check(l >= 1, "segment_length must be positive");
    const Column& sp = need(c, "segment_pos");
    expect_index_type(sp, "segment_pos");
    std::uint64_t n = need(c, "segment_data").size();
    check(sp.size() == (n + l - 1) / l, "segment_pos count does not match the data length");
    auto segs = indices_of(sp);
    auto sorted = segs;
    std::sort(sorted.begin(), sorted.end());
    check(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "repeated segment_pos");
    if (n % l != 0) check(segs.back() == sorted.back(), "short segment must be the last position");
    if (!segs.empty()) {
      check(sp.type().contains(static_cast<i128>(sorted.back()) * l + l - 1),
            "positions overflow the position type");
    }
    return VerifyResult::accept();
  };
  e.canonicalize = canonical_subcolumn_family;
  reg.register_codec(std::move(e));
}

// --------------------------------------------------------------- index sets

ColumnFamily canonical_index_set(const ColumnFamily& f) {
  const Column& el = need(f, "elements");
  std::vector<std::size_t> order(el.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return el.integer(a) < el.integer(b); });
  return {{"full_length", need(f, "full_length")}, {"elements", take(el, order)}};
}

// Input index set: full_length scalar and distinct elements below it.
std::pair<std::uint64_t, std::vector<std::uint64_t>> index_set_input(const ColumnFamily& in) {
  const Column& full = need(in, "full_length");
  const Column& el = need(in, "elements");
  require(in.size() == 2 && full.size() == 1 && full.type() == el.type() && el.type().is_integer(),
          Errc::invalid_argument, "expected scalar 'full_length' and 'elements' of one integer type");
  std::uint64_t n = full.u64(0);
  if (!distinct_below(el, n)) not_encodable("elements must be distinct and below full_length");
  auto v = indices_of(el);
  std::sort(v.begin(), v.end());
  return {n, v};
}

void register_index_sets(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "indexset.sparse";
    e.summary = "index subset listed in any order";
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto full = b.input("domain_length", type_at(t, "domain_length"));
      auto el = b.input("members", type_at(t, "members"));
      b.output("full_length", b.noop(full));
      b.output("elements", sort_indices(b, el, full));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      auto [n, v] = index_set_input(in);
      ElementType t = need(in, "elements").type();
      return SchemeInstance{"", json::object(),
                            {{"domain_length", need(in, "full_length")},
                             {"members", index_column(t, v, "members")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"domain_length", "members"});
      std::uint64_t n = need_scalar(c, "domain_length");
      check(need(c, "members").type() == need(c, "domain_length").type(), "types differ");
      check(distinct_below(need(c, "members"), n), "members must be distinct and below domain_length");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_index_set;
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "indexset.dense";
    e.summary = "index subset as its characteristic bit column";
    e.param_schema = {{"type", "decoded index type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      ElementType it = ptype(p, "type", kU32);
      auto ch = b.input("characteristic", type_at(t, "characteristic"));
      b.output("full_length", b.length(ch, it));
      b.output("elements", b.select_indices(ch, it));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      auto [n, v] = index_set_input(in);
      std::vector<bool> bits(n, false);
      for (auto x : v) bits[x] = true;
      return SchemeInstance{"", json{{"type", need(in, "elements").type().to_string()}},
                            {{"characteristic", Column::from_bits(bits)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"characteristic"});
      check(need(c, "characteristic").type().is_bit(), "characteristic must be a bit column");
      check(ptype(p, "type", kU32).contains(static_cast<i128>(need(c, "characteristic").size())),
            "length does not fit the index type");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_index_set;
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "indexset.contiguous";
    e.summary = "index subset start..start+length-1";
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      ElementType it = type_at(t, "start");
      auto full = b.input("domain_length", type_at(t, "domain_length"));
      auto start = b.input("start", it);
      auto len = b.input("length", type_at(t, "length"));
      Wire idx = b.iota(len, it);
      b.output("full_length", b.noop(full));
      b.output("elements", b.ew("add", {idx, broadcast(b, start, idx)}));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      auto [n, v] = index_set_input(in);
      ElementType t = need(in, "elements").type();
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] != v[i - 1] + 1) not_encodable("elements are not contiguous");
      }
      std::uint64_t start = v.empty() ? 0 : v.front();
      return SchemeInstance{"", json::object(),
                            {{"domain_length", need(in, "full_length")},
                             {"start", scalar_of(t, start, "start")},
                             {"length", scalar_of(t, v.size(), "length")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"domain_length", "start", "length"});
      std::uint64_t n = need_scalar(c, "domain_length");
      std::uint64_t s = need_scalar(c, "start"), l = need_scalar(c, "length");
      check(need(c, "start").type() == need(c, "domain_length").type() &&
                need(c, "length").type() == need(c, "domain_length").type(),
            "scalar types differ");
      check(s + l <= n && s + l >= s, "range exceeds full_length");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_index_set;
    reg.register_codec(std::move(e));
  }
}

// ---------------------------------------------------------------- partitions

void register_partitions(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "partition";
    e.summary = "partition as a column of part identifiers";
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      b.output("partition", b.noop(b.input("part_of", type_at(t, "part_of"))));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      const Column& part = need(in, "partition");
      require(in.size() == 1 && part.type().is_integer(), Errc::invalid_argument,
              "expected one integer 'partition' column");
      return SchemeInstance{"", json::object(), {{"part_of", canonical_partition(part)}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"part_of"});
      check(need(c, "part_of").type().is_integer(), "partition must be integers");
      return VerifyResult::accept();
    };
    e.canonicalize = [](const ColumnFamily& f) {
      return ColumnFamily{{"partition", canonical_partition(need(f, "partition"))}};
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "partition.k";
    e.summary = "column split into k subcolumns (pos_j, data_j) covering all indices";
    e.param_schema = {{"k", "number of parts"}, {"pos_type", "position type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      auto k = param_int(p, "k");
      require(k >= 1, Errc::invalid_argument, "k must be positive");
      CircuitBuilder b;
      std::vector<Wire> pos, data;
      for (int j = 0; j < k; ++j) {
        pos.push_back(b.input("pos" + std::to_string(j), type_at(t, "pos" + std::to_string(j))));
        data.push_back(b.input("data" + std::to_string(j), type_at(t, "data" + std::to_string(j))));
      }
      Wire all_pos = k == 1 ? pos[0] : b.concat(pos);
      Wire all_data = k == 1 ? data[0] : b.concat(data);
      b.output(kColumnLabel, b.permute(all_pos, all_data));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = need(in, kColumnLabel);
      const Column& part = need(in, "partition");
      require(in.size() == 2 && part.size() == col.size() && part.type().is_integer(),
              Errc::invalid_argument, "expected 'column' and an equally long integer 'partition'");
      auto k = param_int(p, "k");
      require(k >= 1, Errc::invalid_argument, "k must be positive");
      ElementType pt = ptype(p, "pos_type", kU32);
      for (std::size_t i = 0; i < part.size(); ++i) {
        if (part.integer(i) < 0 || part.integer(i) >= k) {
          not_encodable("part id " + int128_to_string(part.integer(i)) + " outside 0.." +
                        std::to_string(k - 1));
        }
      }
      auto pieces = partition_materialize(part, static_cast<std::uint64_t>(k), pt);
      SchemeInstance inst{"", json{{"k", k}, {"pos_type", pt.to_string()}}, {}};
      for (int j = 0; j < k; ++j) {
        inst.columns["pos" + std::to_string(j)] = pieces[j];
        inst.columns["data" + std::to_string(j)] = ops::gather(pieces[j], col);
      }
      return inst;
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      auto k = param_int(p, "k");
      check(k >= 1, "k must be positive");
      std::vector<std::string> labels;
      std::vector<Column> pos;
      std::uint64_t n = 0;
      for (int j = 0; j < k; ++j) {
        labels.push_back("pos" + std::to_string(j));
        labels.push_back("data" + std::to_string(j));
      }
      expect_labels(c, labels);
      for (int j = 0; j < k; ++j) {
        const Column& pj = need(c, "pos" + std::to_string(j));
        const Column& dj = need(c, "data" + std::to_string(j));
        check(pj.type() == need(c, "pos0").type() && dj.type() == need(c, "data0").type(),
              "parts differ in type");
        check(pj.size() == dj.size(), "part " + std::to_string(j) + ": pos and data lengths differ");
        pos.push_back(pj);
        n += pj.size();
      }
      check(distinct_below(ops::concatenate(pos), n), "positions do not cover 0..n-1 exactly once");
      return VerifyResult::accept();
    };
    e.canonicalize = [](const ColumnFamily& f) {
      return ColumnFamily{{kColumnLabel, need(f, kColumnLabel)}};
    };
    reg.register_codec(std::move(e));
  }
}

// ---------------------------------------------------------------- components

void register_components(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "components";
    e.summary = "product column as separate component columns c0..c{k-1}";
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      std::vector<Wire> parts;
      for (std::size_t j = 0; t.count("c" + std::to_string(j)); ++j) {
        parts.push_back(b.input("c" + std::to_string(j), t.at("c" + std::to_string(j))));
      }
      b.output(kColumnLabel, b.zip(parts));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      const Column& col = input_column(in);
      require(col.type().is_product(), Errc::invalid_argument, "components needs a product column");
      SchemeInstance inst{"", json::object(), {}};
      for (std::size_t j = 0; j < col.arity(); ++j) inst.columns["c" + std::to_string(j)] = col.component(j);
      return inst;
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      check(!c.empty(), "no components");
      std::vector<std::string> labels;
      for (std::size_t j = 0; j < c.size(); ++j) labels.push_back("c" + std::to_string(j));
      expect_labels(c, labels);
      for (const auto& [label, col] : c) {
        check(col.size() == c.begin()->second.size(), "components differ in length");
      }
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  auto same_typed_product = [](const Column& col) {
    require(col.type().is_product(), Errc::invalid_argument, "a product column is required");
    for (const auto& t : col.type().components()) {
      if (t != col.type().components().front()) not_encodable("components must share one type");
    }
    return col.type().components().front();
  };
  {
    CodecEntry e;
    e.scheme_id = "components.concatenated";
    e.summary = "product column as its k components laid end to end";
    e.param_schema = {{"k", "component count"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      auto k = param_int(p, "k");
      CircuitBuilder b;
      auto data = b.input("data", type_at(t, "data"));
      Wire l = b.ew_const("div", b.length(data), k);
      b.output(kColumnLabel, b.add1("ComposeSegments", json{{"type", data.type.to_string()}, {"k", k}},
                                    {{"segment_length", l}, {"col", data}}));
      return b.build();
    };
    e.encode = [same_typed_product](const json&, const ColumnFamily& in) {
      const Column& col = input_column(in);
      same_typed_product(col);
      auto k = static_cast<std::int64_t>(col.arity());
      return SchemeInstance{"", json{{"k", k}}, {{"data", concat(col.components())}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"data"});
      auto k = param_int(p, "k");
      check(k >= 1, "k must be positive");
      check(need(c, "data").size() % static_cast<std::uint64_t>(k) == 0, "length not divisible by k");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "components.shattered";
    e.summary = "product column with components interleaved element by element";
    e.param_schema = {{"k", "component count"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      auto k = param_int(p, "k");
      CircuitBuilder b;
      auto data = b.input("data", type_at(t, "data"));
      Wire assembled = b.add1("Assemble", json{{"type", data.type.to_string()}, {"k", k}}, {{"col", data}});
      b.output(kColumnLabel, assembled);
      return b.build();
    };
    e.encode = [same_typed_product](const json&, const ColumnFamily& in) {
      const Column& col = input_column(in);
      same_typed_product(col);
      std::size_t k = col.arity();
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < col.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) idx.push_back(j * col.size() + i);
      }
      return SchemeInstance{"", json{{"k", k}}, {{"data", take(concat(col.components()), idx)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"data"});
      auto k = param_int(p, "k");
      check(k >= 1, "k must be positive");
      check(need(c, "data").size() % static_cast<std::uint64_t>(k) == 0, "length not divisible by k");
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "value.indicators";
    e.summary = "one indicator bit segment per domain value; exactly one bit set per row";
    e.param_schema = {{"type", "decoded type (default u32)"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      CircuitBuilder b;
      ElementType out = ptype(p, "type", kU32);
      auto d = b.input("domain_size", type_at(t, "domain_size"));
      auto ind = b.input("indicators", type_at(t, "indicators"));
      Wire n = scalar_op(b, "div", b.length(ind), d);
      Wire set = b.select_indices(ind);
      Wire nn = broadcast(b, n, set);
      Wire value = b.ew("div", {set, nn});
      Wire row = b.ew("mod", {set, nn});
      b.output(kColumnLabel, b.permute(row, b.cast(value, out)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      const Column& col = input_column(in);
      require(col.type().is_integer(), Errc::invalid_argument, "value.indicators needs integers");
      i128 top = 0;
      for (std::size_t i = 0; i < col.size(); ++i) {
        if (col.integer(i) < 0) not_encodable("negative value at index " + std::to_string(i));
        top = std::max(top, col.integer(i) + 1);
      }
      std::uint64_t d = std::max<std::uint64_t>(static_cast<std::uint64_t>(top),
                                                static_cast<std::uint64_t>(param_int_or(p, "domain_size", 1)));
      std::size_t n = col.size();
      std::vector<bool> bits(d * n, false);
      for (std::size_t i = 0; i < n; ++i) bits[col.u64(i) * n + i] = true;
      return SchemeInstance{"", json{{"type", col.type().to_string()}, {"domain_size", d}},
                            {{"domain_size", scalar_of(kU32, d, "domain_size")},
                             {"indicators", Column::from_bits(bits)}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"domain_size", "indicators"});
      std::uint64_t d = need_scalar(c, "domain_size");
      const Column& ind = need(c, "indicators");
      check(ind.type().is_bit(), "indicators must be bits");
      check(d >= 1, "domain_size must be positive");
      check(ind.size() % d == 0, "indicator count is not a multiple of domain_size");
      std::uint64_t n = ind.size() / d;
      check(ptype(p, "type", kU32).contains(static_cast<i128>(d) - 1), "domain exceeds the decoded type");
      std::vector<int> count(n, 0);
      for (std::size_t k = 0; k < ind.size(); ++k) count[k % n] += ind.bit(k);
      for (std::size_t i = 0; i < n; ++i) {
        check(count[i] == 1, "row " + std::to_string(i) + " has " + std::to_string(count[i]) + " bits set");
      }
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ---------------------------------------------------------- variable width

std::pair<Column, Column> varwidth_input(const ColumnFamily& in) {
  const Column& len = need(in, "length");
  const Column& data = need(in, "data");
  require(in.size() == 2 && len.type().is_integer(), Errc::invalid_argument,
          "expected integer 'length' and 'data'");
  require(total_of(len) == data.size(), Errc::invalid_argument, "lengths do not sum to the data length");
  return {len, data};
}

void register_varwidth(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "varwidth.std";
    e.summary = "variable-width elements as (start_position, length) ranges over data";
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto start = b.input("start_position", type_at(t, "start_position"));
      auto len = b.input("element_length", type_at(t, "element_length"));
      auto data = b.input("values", type_at(t, "values"));
      auto [src, elem] = expand_ranges(b, start, len);
      (void)elem;
      b.output("length", b.noop(len));
      b.output("data", b.gather(src, data));
      return b.build();
    };
    e.encode = [](const json&, const ColumnFamily& in) {
      auto [len, data] = varwidth_input(in);
      auto l = indices_of(len);
      std::vector<std::uint64_t> s(l.size());
      std::exclusive_scan(l.begin(), l.end(), s.begin(), std::uint64_t{0});
      return SchemeInstance{"", json::object(),
                            {{"start_position", index_column(len.type(), s, "start_position")},
                             {"element_length", len},
                             {"values", data}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"start_position", "element_length", "values"});
      const Column& s = need(c, "start_position");
      const Column& l = need(c, "element_length");
      expect_index_type(s, "start_position");
      expect_index_type(l, "element_length");
      check(s.size() == l.size(), "start_position and length differ in count");
      std::uint64_t n = need(c, "values").size();
      for (std::size_t i = 0; i < s.size(); ++i) {
        check(s.u64(i) <= n && l.u64(i) <= n - s.u64(i),
              "element " + std::to_string(i) + " overruns the data");
      }
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "varwidth.capped";
    e.summary = "variable-width elements each in a fixed buffer of max_length slots";
    e.param_schema = {{"max_length", "slots per element"}};
    e.build_decoder = [](const json& p, const TypeMap& t) {
      auto cap = param_int(p, "max_length");
      CircuitBuilder b;
      auto len = b.input("element_length", type_at(t, "element_length"));
      auto data = b.input("slots", type_at(t, "slots"));
      Wire starts = b.ew("scale", {b.iota(b.length(len))}, json{{"k", cap}});
      auto [src, elem] = expand_ranges(b, starts, len);
      (void)elem;
      b.output("length", b.noop(len));
      b.output("data", b.gather(src, data));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      auto [len, data] = varwidth_input(in);
      auto l = indices_of(len);
      std::uint64_t cap = 0;
      for (auto x : l) cap = std::max(cap, x);
      if (p.contains("max_length")) {
        std::uint64_t want = static_cast<std::uint64_t>(param_int(p, "max_length"));
        if (cap > want) not_encodable("an element is longer than max_length");
        cap = want;
      }
      cap = std::max<std::uint64_t>(cap, 1);
      ColumnBuilder buf(data.type(), l.size() * cap);
      std::size_t at = 0;
      for (auto x : l) {
        for (std::uint64_t k = 0; k < cap; ++k) {
          if (k < x) buf.push_from(data, at + k);
          else buf.push_raw(0);
        }
        at += x;
      }
      return SchemeInstance{"", json{{"max_length", cap}}, {{"element_length", len}, {"slots", buf.finish()}}};
    };
    e.verify = [](const json& p, const ColumnFamily& c) {
      expect_labels(c, {"element_length", "slots"});
      auto cap = param_int(p, "max_length");
      check(cap >= 1, "max_length must be positive");
      const Column& l = need(c, "element_length");
      expect_index_type(l, "element_length");
      check(need(c, "slots").size() == l.size() * static_cast<std::uint64_t>(cap),
            "data must hold max_length slots per element");
      for (std::size_t i = 0; i < l.size(); ++i) {
        check(l.u64(i) <= static_cast<std::uint64_t>(cap), "element " + std::to_string(i) + " exceeds max_length");
      }
      return VerifyResult::accept();
    };
    reg.register_codec(std::move(e));
  }
}

// ------------------------------------------------------------------ nullable

std::pair<Column, Column> nullable_input(const ColumnFamily& in) {
  const Column& valid = need(in, "valid");
  const Column& data = need(in, "data");
  require(in.size() == 2 && valid.type().is_bit() && valid.size() == data.size() &&
              !data.type().is_product(),
          Errc::invalid_argument, "expected bit 'valid' and an equally long 'data'");
  return {valid, data};
}

ColumnFamily canonical_nullable(const ColumnFamily& f) {
  const Column& valid = need(f, "valid");
  const Column& data = need(f, "data");
  ColumnBuilder b(data.type(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (valid.bit(i)) b.push_from(data, i);
    else b.push_raw(0);
  }
  return {{"valid", valid}, {"data", b.finish()}};
}

void register_nullable(CodecRegistry& reg) {
  {
    CodecEntry e;
    e.scheme_id = "nullable.complementing";
    e.summary = "non-null values at pos; nulls form a constant complement of null_count elements";
    e.param_schema = {{"pos_type", "position type (default u32)"}};
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto pos = b.input("pos", type_at(t, "pos"));
      auto values = b.input("values", type_at(t, "values"));
      auto nulls = b.input("null_count", type_at(t, "null_count"));
      Wire n = scalar_op(b, "add", b.length(values), nulls);
      b.output("valid", marks_at(b, n, pos));
      Wire zero = b.constant(values.type, 0);
      b.output("data", b.scatter(b.replicate(zero, n), pos, values));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      auto [valid, data] = nullable_input(in);
      ElementType pt = ptype(p, "pos_type", kU32);
      std::vector<std::uint64_t> pos;
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < valid.size(); ++i) {
        if (valid.bit(i)) pos.push_back(i), keep.push_back(i);
      }
      return SchemeInstance{"", json{{"pos_type", pt.to_string()}},
                            {{"pos", index_column(pt, pos, "pos")},
                             {"values", take(data, keep)},
                             {"null_count", scalar_of(pt, valid.size() - pos.size(), "null_count")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"pos", "values", "null_count"});
      const Column& pos = need(c, "pos");
      check(pos.type().is_integer(), "pos must be integers");
      check(pos.size() == need(c, "values").size(), "pos and values lengths differ");
      std::uint64_t n = pos.size() + need_scalar(c, "null_count");
      check(distinct_below(pos, n), "positions must be distinct and below the column length");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_nullable;
    reg.register_codec(std::move(e));
  }
  {
    CodecEntry e;
    e.scheme_id = "nullable.patched";
    e.summary = "full data column overlaid with nulls at null_pos";
    e.param_schema = {{"pos_type", "position type (default u32)"}};
    e.build_decoder = [](const json&, const TypeMap& t) {
      CircuitBuilder b;
      auto data = b.input("base_data", type_at(t, "base_data"));
      auto npos = b.input("null_pos", type_at(t, "null_pos"));
      Wire n = b.length(data);
      b.output("valid", b.ew("not", {marks_at(b, n, npos)}));
      Wire zero = b.constant(data.type, 0);
      b.output("data", b.scatter(data, npos, broadcast(b, zero, npos)));
      return b.build();
    };
    e.encode = [](const json& p, const ColumnFamily& in) {
      auto [valid, data] = nullable_input(in);
      ElementType pt = ptype(p, "pos_type", kU32);
      std::vector<std::uint64_t> npos;
      for (std::size_t i = 0; i < valid.size(); ++i) {
        if (!valid.bit(i)) npos.push_back(i);
      }
      auto canon = canonical_nullable(in);
      return SchemeInstance{"", json{{"pos_type", pt.to_string()}},
                            {{"base_data", canon.at("data")}, {"null_pos", index_column(pt, npos, "null_pos")}}};
    };
    e.verify = [](const json&, const ColumnFamily& c) {
      expect_labels(c, {"base_data", "null_pos"});
      check(need(c, "null_pos").type().is_integer(), "null_pos must be integers");
      check(distinct_below(need(c, "null_pos"), need(c, "base_data").size()),
            "null positions must be distinct and inside the column");
      return VerifyResult::accept();
    };
    e.canonicalize = canonical_nullable;
    reg.register_codec(std::move(e));
  }
}

}  // namespace

void register_representation_schemes(CodecRegistry& reg) {
  register_indexed(reg);
  register_subcolumn_std(reg);
  register_subcolumn_pairs(reg);
  register_column_pairs(reg);
  register_segmentations(reg);
  register_segmented_subcolumn(reg);
  register_index_sets(reg);
  register_partitions(reg);
  register_components(reg);
  register_varwidth(reg);
  register_nullable(reg);
}

}  // namespace colcirc::detail
