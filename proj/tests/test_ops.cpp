#include <gtest/gtest.h>

#include <random>

#include "colcirc/catalog.hpp"
#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"
#include "support/generators.hpp"

namespace colcirc {
namespace {

using testing::Rng;

const ElementType kU8 = ElementType::u(8);
const ElementType kU64 = ElementType::u(64);

Column chars(const std::string& s) {
  std::vector<std::uint64_t> v(s.begin(), s.end());
  return Column::from_u64(kU8, v);
}
Column idx(std::vector<std::uint64_t> v) { return Column::from_u64(kU64, v); }
Column bits(std::vector<bool> v) { return Column::from_bits(v); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::invalid_argument;
}

TEST(Ops, LogicalAnd) {
  EXPECT_EQ(ops::logical_and(bits({1, 0, 1}), bits({1, 1, 0})), bits({1, 0, 0}));
}

TEST(Ops, InRangeIsInclusive) {
  auto c = Column::from_u64(ElementType::u(32), {5, 9, 2});
  EXPECT_EQ(ops::in_range(c, 3, 8), bits({1, 0, 0}));
  EXPECT_EQ(ops::in_range(c, 5, 9), bits({1, 1, 0}));
}

TEST(Ops, ArithmeticOverflowFails) {
  auto a = Column::from_u64(kU8, {200});
  EXPECT_EQ(code_of([&] { ops::add(a, a); }), Errc::arithmetic_overflow);
  EXPECT_EQ(code_of([&] { ops::add(a, chars("ab")); }), Errc::length_mismatch);
}

TEST(Ops, Permute) {
  EXPECT_EQ(ops::permute(idx({1, 2, 0}), chars("abc")), chars("cab"));
  EXPECT_EQ(code_of([&] { ops::permute(idx({1, 1, 0}), chars("abc")); }),
            Errc::not_a_permutation);
}

TEST(Ops, ScatterGather) {
  EXPECT_EQ(ops::scatter(chars("xxx"), idx({0, 2}), chars("ab")), chars("axb"));
  EXPECT_EQ(ops::gather(idx({2, 0}), chars("abc")), chars("ca"));
  EXPECT_EQ(code_of([&] { ops::gather(idx({3}), chars("abc")); }), Errc::out_of_range);
  EXPECT_EQ(code_of([&] { ops::scatter(chars("xxx"), idx({1, 1}), chars("ab")); }),
            Errc::duplicate_position);
}

TEST(Ops, SelectAndIndices) {
  EXPECT_EQ(ops::select(chars("abcd"), bits({0, 1, 1, 0})), chars("bc"));
  EXPECT_EQ(ops::select_indices(bits({0, 1, 1, 0})), idx({1, 2}));
}

TEST(Ops, IotaReplicateLength) {
  EXPECT_EQ(ops::iota(4), idx({0, 1, 2, 3}));
  EXPECT_EQ(ops::replicate(chars("z"), 3), chars("zzz"));
  EXPECT_EQ(ops::length_of(chars("hello")), 5u);
  EXPECT_EQ(ops::concatenate({chars("ab"), chars(""), chars("c")}), chars("abc"));
}

TEST(Ops, Transpose) {
  auto [t, l] = ops::transpose(3, idx({0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(l, 2u);
  EXPECT_EQ(t, idx({0, 3, 1, 4, 2, 5}));
  EXPECT_EQ(code_of([&] { ops::transpose(4, idx({0, 1, 2, 3, 4, 5})); }), Errc::slack_segment_present);
}

TEST(Ops, SegmentReplication) {
  auto [a, la] = ops::replicate_segments(chars("abcd"), 2, 2);
  EXPECT_EQ(a, chars("ababcdcd"));
  EXPECT_EQ(la, 2u);
  auto [b, lb] = ops::replicate_within_segments(chars("abcd"), 2, 2);
  EXPECT_EQ(b, chars("aabbccdd"));
  EXPECT_EQ(lb, 4u);
}

TEST(Ops, ComposeSegmentsAndAssemble) {
  EXPECT_EQ(ops::compose_segments(2, chars("abcd")), ops::zip({chars("ab"), chars("cd")}));
  EXPECT_EQ(ops::assemble(2, chars("abcd")), ops::zip({chars("ac"), chars("bd")}));
  auto parts = ops::unzip(ops::zip({chars("ab"), idx({1, 2})}));
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[1], idx({1, 2}));
}

TEST(Ops, DerivativeAndPrefix) {
  auto c = Column::from_i64(ElementType::i(32), {1, 4, 6});
  EXPECT_EQ(ops::derivative(c), Column::from_i64(ElementType::i(64), {3, 2}));
  EXPECT_EQ(ops::derivative(Column::from_u64(kU8, {5})).type(), ElementType::i(16));
  EXPECT_EQ(ops::derivative(Column::from_u64(kU8, {5})).size(), 0u);
  auto p = Column::from_i64(ElementType::i(32), {1, 2, 3});
  EXPECT_EQ(ops::prefix_aggregate(p, ops::Aggregate::add, false),
            Column::from_i64(ElementType::i(32), {0, 1, 3}));
  EXPECT_EQ(ops::prefix_aggregate(p, ops::Aggregate::add, true),
            Column::from_i64(ElementType::i(32), {1, 3, 6}));
  EXPECT_EQ(ops::last(p), Column::from_i64(ElementType::i(32), {3}));
  auto [head, tail] = ops::split_first(p);
  EXPECT_EQ(head.size(), 1u);
  EXPECT_EQ(tail.size(), 2u);
  EXPECT_THROW(ops::derivative(empty_column(ElementType::i(32))), Error);
}

TEST(Ops, IsSameAsPrevious) {
  EXPECT_EQ(ops::is_same_as_previous(chars("aabbb")), bits({0, 1, 0, 1, 1}));
}

TEST(Ops, CarveTakesHighAndLowBits) {
  auto [hi, lo] = ops::carve(Column::from_u64(kU8, {181}), 8, 3);
  EXPECT_EQ(hi.u64(0), 5u);
  EXPECT_EQ(lo.u64(0), 21u);
}

TEST(Ops, CatalogOperatorMatchesDirectCall) {
  auto op = make_op("Permute", {{"type", "u8"}});
  auto out = op->evaluate({idx({1, 2, 0}), chars("abc")});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], chars("cab"));
  EXPECT_THROW(make_op("NoSuchOp"), Error);
}

// Properties over random inputs.

TEST(OpsProperty, GatherInvertsScatter) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 40;
    auto pos_v = testing::random_subset(rng, n, rng() % (n + 1));
    auto pos = idx(pos_v);
    auto base = testing::random_ints(rng, ElementType::i(32), n, -100, 100);
    auto data = testing::random_ints(rng, ElementType::i(32), pos_v.size(), -100, 100);
    EXPECT_EQ(ops::gather(pos, ops::scatter(base, pos, data)), data);
  }
}

TEST(OpsProperty, SelectIsGatherOfSelectedIndices) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = rng() % 50;
    auto data = testing::random_ints(rng, ElementType::u(16), n, 0, 60000);
    auto sel = testing::random_bits(rng, n, 0.3);
    EXPECT_EQ(ops::select(data, sel), ops::gather(ops::select_indices(sel), data));
  }
}

TEST(OpsProperty, AssembleIsComposeOfTranspose) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::uint64_t k = 1 + rng() % 5;
    std::uint64_t m = rng() % 9;
    auto c = testing::random_ints(rng, kU8, k * m, 0, 255);
    if (m == 0) {
      EXPECT_EQ(ops::assemble(k, c).size(), 0u);
      continue;
    }
    auto [t, l] = ops::transpose(k, c);
    EXPECT_EQ(ops::assemble(k, c), ops::compose_segments(l, t));
  }
}

TEST(OpsProperty, PermuteThenInverseIsIdentity) {
  Rng rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = rng() % 40;
    std::vector<std::uint64_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    std::shuffle(p.begin(), p.end(), rng);
    std::vector<std::uint64_t> inv(n);
    for (std::size_t i = 0; i < n; ++i) inv[p[i]] = i;
    auto data = testing::random_ints(rng, ElementType::i(64), n, -5, 5);
    EXPECT_TRUE(ops::is_permutation(idx(p)));
    EXPECT_EQ(ops::permute(idx(inv), ops::permute(idx(p), data)), data);
  }
}

TEST(OpsProperty, PrefixSumOfDerivativeRestoresTail) {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 40;
    auto c = testing::random_ints(rng, ElementType::i(64), n, -1000, 1000);
    auto sums = ops::prefix_aggregate(ops::derivative(c), ops::Aggregate::add, true);
    for (std::size_t i = 1; i < n; ++i) EXPECT_EQ(sums.integer(i - 1) + c.integer(0), c.integer(i));
  }
}

TEST(OpsProperty, CarveSplitsExactly) {
  Rng rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    int w = 2 + static_cast<int>(rng() % 31);
    int p = 1 + static_cast<int>(rng() % (w - 1));
    auto t = ElementType::u(32);
    std::uint64_t v = rng() & ((1ull << w) - 1);
    auto [hi, lo] = ops::carve(Column::from_u64(t, {v}), w, p);
    EXPECT_EQ((hi.u64(0) << (w - p)) | lo.u64(0), v);
    EXPECT_LT(hi.u64(0), 1ull << p);
  }
}

}  // namespace
}  // namespace colcirc
