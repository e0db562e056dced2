#include <gtest/gtest.h>

#include <random>

#include "colcirc/codec.hpp"
#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"
#include "colcirc/schemes.hpp"
#include "support/generators.hpp"

namespace colcirc {
namespace {

using testing::Rng;

const ElementType kU8 = ElementType::u(8);
const ElementType kU32 = ElementType::u(32);

Column chars(const std::string& s) {
  std::vector<std::uint64_t> v(s.begin(), s.end());
  return Column::from_u64(kU8, v);
}
Column u32s(std::vector<std::uint64_t> v) { return Column::from_u64(kU32, v); }
Column bits(std::vector<bool> v) { return Column::from_bits(v); }

std::string text(const Column& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) s.push_back(static_cast<char>(c.u64(i)));
  return s;
}

Subcolumn sub(std::vector<std::uint64_t> pos, const std::string& data) {
  return {u32s(std::move(pos)), chars(data)};
}

// Random subcolumn of a fixed supercolumn, so any two are compatible.
Subcolumn random_sub(Rng& rng, const Column& super) {
  auto pos = testing::random_subset(rng, super.size(), rng() % (super.size() + 1));
  std::vector<std::size_t> at(pos.begin(), pos.end());
  return {u32s(pos), take(super, at)};
}

TEST(Indexed, Examples) {
  SchemeInstance id{"indexed", json::object(), {{"pos", u32s({0, 1, 2})}, {"data", chars("abc")}}};
  EXPECT_EQ(text(decode_column(id)), "abc");
  SchemeInstance perm{"indexed", json::object(), {{"pos", u32s({2, 0, 1})}, {"data", chars("abc")}}};
  EXPECT_EQ(text(decode_column(perm)), "bca");
  SchemeInstance dup{"indexed", json::object(), {{"pos", u32s({0, 0, 1})}, {"data", chars("abc")}}};
  EXPECT_FALSE(verify(dup));
}

TEST(Subcolumn, OverlayOfPartiallyDisagreeingSubcolumns) {
  auto base = sub({0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, "helloworld");
  auto top = sub({9, 6, 7, 8}, "sart");
  auto o = subcolumn_overlay(base, top);
  EXPECT_EQ(text(o.data), "hellowarts");
  EXPECT_EQ(subcolumn_overlay(base, sub({}, "")), canonical_subcolumn(base));
  auto gappy = sub({1, 8}, "eL");
  auto over = subcolumn_overlay(gappy, sub({3, 8}, "lL"));
  EXPECT_EQ(over.pos, u32s({1, 3, 8}));
  EXPECT_EQ(text(over.data), "elL");
}

TEST(Subcolumn, UnionAndContainment) {
  auto a = sub({0}, "h");
  auto b = sub({4}, "o");
  auto u = subcolumn_union(a, b);
  EXPECT_EQ(u.pos.size(), 2u);
  EXPECT_EQ(subcolumn_union(u, u), u);
  EXPECT_TRUE(subcolumn_contained(a, u));
  EXPECT_FALSE(subcolumn_contained(u, a));
  try {
    subcolumn_union(a, sub({0}, "x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::incompatible_subcolumns);
  }
  EXPECT_THROW(canonical_subcolumn(sub({1, 1}, "ab")), Error);
}

TEST(Subcolumn, Schemes) {
  auto u = encode("subcolumn.union.disjoint", json::object(), sub({3, 0, 7}, "abc").family());
  EXPECT_TRUE(verify(u));
  EXPECT_TRUE(equivalent("subcolumn.std", decode(u), sub({0, 3, 7}, "bac").family()));
  SchemeInstance ov{"subcolumn.overlay", json::object(),
                    {{"pos1", u32s({0, 1})}, {"data1", chars("ab")},
                     {"pos2", u32s({1, 2})}, {"data2", chars("XY")}}};
  ASSERT_TRUE(verify(ov));
  EXPECT_TRUE(equivalent("subcolumn.std", decode(ov), sub({0, 1, 2}, "aXY").family()));
}

TEST(Subcolumn, LatticeLaws) {
  Rng rng(51);
  auto super = testing::random_ints(rng, kU8, 30, 0, 255);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = random_sub(rng, super), b = random_sub(rng, super), c = random_sub(rng, super);
    EXPECT_EQ(subcolumn_union(a, b), subcolumn_union(b, a));
    EXPECT_EQ(subcolumn_union(subcolumn_union(a, b), c), subcolumn_union(a, subcolumn_union(b, c)));
    EXPECT_EQ(subcolumn_union(a, a), canonical_subcolumn(a));
    EXPECT_EQ(subcolumn_overlay(subcolumn_overlay(a, b), c),
              subcolumn_overlay(a, subcolumn_overlay(b, c)));
    auto o = subcolumn_overlay(a, b);
    EXPECT_TRUE(subcolumn_contained(a, o));
    EXPECT_TRUE(subcolumn_contained(b, o));
  }
}

TEST(Complementing, Examples) {
  SchemeInstance inst{"column.complementing", json::object(),
                      {{"pos", u32s({1})}, {"data1", chars("x")}, {"data2", chars("ab")}}};
  EXPECT_EQ(text(decode_column(inst)), "axb");
  inst.columns["pos"] = u32s({});
  inst.columns["data1"] = chars("");
  EXPECT_EQ(text(decode_column(inst)), "ab");
  SchemeInstance all{"column.complementing", json::object(),
                     {{"pos", u32s({1, 0})}, {"data1", chars("pq")}, {"data2", chars("")}}};
  EXPECT_EQ(text(decode_column(all)), "qp");
}

TEST(Overlaid, PatchesUseWiderType) {
  // 8-bit base text with 16-bit patches.
  auto base = chars("hej svejs");
  auto wide = Column::from_u64(ElementType::u(16), {0x00E5, 0x00F6});
  SchemeInstance inst{"column.overlaid", {{"type", "u16"}, {"data_type", "u8"}},
                      {{"data", base}, {"overlay_pos", u32s({2, 6})}, {"overlay_data", wide}}};
  ASSERT_TRUE(verify(inst)) << verify(inst).reason;
  auto out = decode_column(inst);
  EXPECT_EQ(out.type(), ElementType::u(16));
  EXPECT_EQ(out.u64(2), 0xE5u);
  EXPECT_EQ(out.u64(6), 0xF6u);
  EXPECT_EQ(out.u64(0), static_cast<std::uint64_t>('h'));
}

TEST(Segmentation, VerifierAcceptsExactlyGapFreeCovers) {
  auto seg = [](std::vector<std::uint64_t> s, std::vector<std::uint64_t> l) {
    return SchemeInstance{"segmentation", json::object(), {{"start", u32s(s)}, {"length", u32s(l)}}};
  };
  EXPECT_TRUE(verify(seg({0, 2, 2}, {2, 0, 3})));  // zero-length segment allowed
  EXPECT_FALSE(verify(seg({1, 3}, {2, 2})));       // not anchored at zero
  EXPECT_FALSE(verify(seg({0, 3}, {2, 2})));       // gap
  EXPECT_FALSE(verify(seg({0, 1}, {2, 2})));       // overlap
  auto inst = encode("segmentation", json::object(), {{"segment_of", u32s({0, 0, 1, 2, 2})}});
  EXPECT_EQ(inst.columns.at("start"), u32s({0, 2, 3}));
  EXPECT_EQ(decode(inst).at("segment_of"), u32s({0, 0, 1, 2, 2}));
}

TEST(Segmented, SegmentedSubcolumnExamples) {
  SchemeInstance inst{"subcolumn.segmented", json::object(),
                      {{"segment_length", u32s({2})}, {"segment_pos", u32s({0, 3})},
                       {"segment_data", chars("abcd")}}};
  ASSERT_TRUE(verify(inst));
  EXPECT_TRUE(equivalent("subcolumn.std", decode(inst), sub({0, 1, 6, 7}, "abcd").family()));
  // "helloworld" without "low": segments of 3 at 0 and 6, slack segment at 9.
  auto sc = sub({0, 1, 2, 6, 7, 8, 9}, "helorld");
  auto enc = encode("subcolumn.segmented", {{"segment_length", 3}}, sc.family());
  EXPECT_EQ(enc.columns.at("segment_pos"), u32s({0, 2, 3}));
  EXPECT_TRUE(equivalent("subcolumn.std", decode(enc), sc.family()));
  EXPECT_THROW(encode("subcolumn.segmented", {{"segment_length", 3}}, sub({0, 1, 3, 4, 5}, "abcde").family()),
               Error);
}

TEST(IndexSets, Examples) {
  SchemeInstance dense{"indexset.dense", json::object(), {{"characteristic", bits({1, 0, 1})}}};
  auto d = decode(dense);
  EXPECT_EQ(d.at("elements").integers(), (std::vector<i128>{0, 2}));
  EXPECT_EQ(d.at("full_length").integer(0), 3);
  SchemeInstance contig{"indexset.contiguous", json::object(),
                        {{"domain_length", u32s({10})}, {"start", u32s({2})}, {"length", u32s({3})}}};
  EXPECT_EQ(decode(contig).at("elements"), u32s({2, 3, 4}));
  ColumnFamily sparse_in{{"full_length", u32s({9})}, {"elements", u32s({5, 1})}};
  auto sparse = encode("indexset.sparse", json::object(), sparse_in);
  EXPECT_EQ(sparse.columns.at("members"), u32s({1, 5}));
  EXPECT_TRUE(equivalent("indexset.sparse", decode(sparse), sparse_in));
  EXPECT_THROW(encode("indexset.contiguous", json::object(), sparse_in), Error);
}

TEST(IndexSets, CodecsAgreeThroughSparseForm) {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    std::uint64_t n = 1 + rng() % 64;
    auto elems = testing::random_subset(rng, n, rng() % (n + 1));
    ColumnFamily in{{"full_length", u32s({n})}, {"elements", u32s(elems)}};
    auto canon = canonical_form("indexset.sparse", in);
    for (const char* id : {"indexset.sparse", "indexset.dense"}) {
      auto out = decode(encode(id, json::object(), in));
      EXPECT_EQ(canonical_form("indexset.sparse", out).at("elements").integers(),
                canon.at("elements").integers())
          << id;
    }
  }
}

TEST(Partition, Materialization) {
  auto parts = partition_materialize(Column::from_u64(kU8, {0, 1, 0}), 2);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0], u32s({0, 2}));
  EXPECT_EQ(parts[1], u32s({1}));
  auto one = partition_materialize(Column::from_u64(kU8, {0, 0}), 3);
  EXPECT_EQ(one[0], u32s({0, 1}));
  EXPECT_EQ(one[2].size(), 0u);
  EXPECT_EQ(canonical_partition(Column::from_u64(kU8, {7, 3, 7, 9})), Column::from_u64(kU8, {0, 1, 0, 2}));
  auto c = partition_materialization_circuit(kU8, 2);
  auto out = evaluate_circuit(c, {{"partition", Column::from_u64(kU8, {0, 1, 0})}});
  EXPECT_EQ(out.at("pos0"), u32s({0, 2}));
  EXPECT_EQ(out.at("pos1"), u32s({1}));
}

TEST(Components, Examples) {
  auto z = ops::zip({u32s({1, 2}), chars("ab")});
  SchemeInstance comp{"components", json::object(), {{"c0", u32s({1, 2})}, {"c1", chars("ab")}}};
  EXPECT_EQ(decode_column(comp), z);
  auto cat = encode("components.concatenated", json::object(), ops::zip({u32s({1, 2}), u32s({3, 4})}));
  EXPECT_EQ(cat.columns.at("data"), u32s({1, 2, 3, 4}));
}

TEST(Components, ShatteredBitSplitRoundTrip) {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = rng() % 20;
    auto col = testing::random_ints(rng, kU8, n, 0, 255);
    // Oracle: split every byte into 8 bit components.
    std::vector<Column> planes;
    for (int b = 0; b < 8; ++b) {
      std::vector<bool> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = (col.u64(i) >> b) & 1;
      planes.push_back(Column::from_bits(v));
    }
    auto z = ops::zip(planes);
    auto inst = encode("components.shattered", json::object(), z);
    EXPECT_EQ(inst.columns.at("data").size(), 8 * n);
    EXPECT_EQ(decode_column(inst), z);
  }
}

TEST(ValueIndicators, PositionalCode) {
  // Domain {a..e} as 0..4; code 00100 marks 'c'.
  SchemeInstance inst{"value.indicators", json::object(),
                      {{"domain_size", u32s({5})}, {"indicators", bits({0, 0, 1, 0, 0})}}};
  ASSERT_TRUE(verify(inst));
  EXPECT_EQ(decode_column(inst), u32s({2}));
  inst.columns["indicators"] = bits({0, 1, 1, 0, 0});
  EXPECT_FALSE(verify(inst));
}

TEST(VariableWidth, OverlappingElements) {
  SchemeInstance inst{"varwidth.std", json::object(),
                      {{"start_position", u32s({0, 1})}, {"element_length", u32s({2, 1})},
                       {"values", chars("abc")}}};
  ASSERT_TRUE(verify(inst));
  auto out = decode(inst);
  EXPECT_EQ(text(varwidth_element(out, 0)), "ab");
  EXPECT_EQ(text(varwidth_element(out, 1)), "b");
}

TEST(VariableWidth, CappedAndEmptyElements) {
  auto fam = make_varwidth(kU8, {chars("a"), chars("bcd"), chars("")});
  auto inst = encode("varwidth.capped", {{"max_length", 4}}, fam);
  EXPECT_EQ(inst.columns.at("slots").size(), 12u);
  auto out = decode(inst);
  EXPECT_EQ(text(varwidth_element(out, 1)), "bcd");
  EXPECT_EQ(varwidth_element(out, 2).size(), 0u);
  EXPECT_THROW(encode("varwidth.capped", {{"max_length", 2}}, fam), Error);
  auto std_inst = encode("varwidth.std", json::object(), fam);
  EXPECT_EQ(decode(std_inst), fam);
}

TEST(Nullable, Strategies) {
  auto data = Column::from_i64(ElementType::i(32), {4, 0, 6, 0});
  ColumnFamily in{{"data", data}, {"valid", bits({1, 0, 1, 0})}};
  for (const char* id : {"nullable.complementing", "nullable.patched"}) {
    auto inst = encode(id, json::object(), in);
    ASSERT_TRUE(verify(inst)) << id;
    auto out = decode(inst);
    EXPECT_EQ(out.at("valid"), in.at("valid")) << id;
    for (std::size_t i : {0u, 2u}) EXPECT_EQ(out.at("data").integer(i), data.integer(i)) << id;
  }
  ColumnFamily none{{"data", data}, {"valid", bits({1, 1, 1, 1})}};
  auto p = encode("nullable.patched", json::object(), none);
  EXPECT_EQ(p.columns.at("null_pos").size(), 0u);
  EXPECT_EQ(decode(p).at("data"), data);
}

}  // namespace
}  // namespace colcirc
