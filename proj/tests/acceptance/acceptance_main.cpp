// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "colcirc/bundle.hpp"
#include "colcirc/codec.hpp"
#include "colcirc/error.hpp"
#include "colcirc/ops.hpp"
#include "colcirc/sample_circuits.hpp"
#include "colcirc/schemes.hpp"
#include "colcirc/synth.hpp"
#include "colcirc/transform.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace {

using namespace colcirc;
using testing::Rng;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1. The 2x+3 circuit on random u32 columns, sequential and concurrent.
Outcome affine_fidelity() {
  Rng rng(101);
  const auto t = ElementType::u(32);
  auto c = affine_circuit(t);
  EvalOptions par;
  par.threads = std::max<std::size_t>(4, default_thread_count());
  std::size_t bad = 0, elements = 0;
  auto t0 = Clock::now();
  for (int k = 0; k < 1000; ++k) {
    // Values stay below 2^31 - 1 so 2x + 3 fits u32.
    auto col = testing::random_ints(rng, t, rng() % 64, 0, (1ll << 31) - 2);
    ColumnFamily in{{"col", col}};
    auto seq = evaluate_circuit(c, in).at("res");
    auto con = evaluate_circuit(c, in, par).at("res");
    for (std::size_t i = 0; i < col.size(); ++i) {
      ++elements;
      i128 want = 2 * col.integer(i) + 3;
      if (seq.integer(i) != want || con.integer(i) != want) ++bad;
    }
    if (seq.size() != col.size() || con.size() != col.size()) ++bad;
  }
  double s = seconds_since(t0);
  return {bad == 0 && s < 1.0, std::to_string(elements) + " elements, " + std::to_string(bad) +
                                   " mismatches, " + fmt("%.3f s", s)};
}

// 2. Revenue query against a row loop.
Outcome q6_oracle() {
  Rng rng(102);
  const auto u32 = ElementType::u(32);
  const std::size_t n = 10000;
  ColumnFamily li{
      {"shipdate", testing::random_ints(rng, u32, n, 8400, 9500)},
      {"discount", testing::random_ints(rng, u32, n, 0, 10)},
      {"quantity", testing::random_ints(rng, u32, n, 1, 50)},
      {"extendedprice", testing::random_ints(rng, ElementType::i(64), n, 90000, 10500000)},
  };
  auto t0 = Clock::now();
  i128 got = evaluate_circuit(q6_circuit(), li).at("revenue").integer(0);
  double s = seconds_since(t0);
  i128 want = testing::q6_revenue(li);
  return {got == want && s < 1.0, "circuit " + int128_to_string(got) + ", row loop " + int128_to_string(want) +
                                      ", " + fmt("%.3f s", s)};
}

// 3. Every scheme: 100 roundtrips and 100 rejected corruptions.
Outcome universal_roundtrip() {
  Rng rng(103);
  auto ids = CodecRegistry::builtin().ids();
  std::size_t failures = 0, roundtrips = 0, corruptions = 0;
  std::string first_failure;
  auto note = [&](const std::string& what) {
    if (failures++ == 0) first_failure = what;
  };
  auto t0 = Clock::now();
  for (const auto& id : ids) {
    int ok = 0, rejected = 0, attempts = 0;
    while ((ok < 100 || rejected < 100) && attempts < 2000) {
      ++attempts;
      auto sc = testing::random_case(id, rng);
      SchemeInstance inst;
      try {
        inst = encode(id, sc.params, sc.input);
        if (!verify(inst)) {
          note(id + ": encoder output rejected");
          continue;
        }
        if (!equivalent(id, decode(inst), sc.input)) {
          note(id + ": roundtrip mismatch");
          continue;
        }
      } catch (const Error& e) {
        note(id + ": " + e.what());
        continue;
      }
      if (ok < 100) ++ok, ++roundtrips;
      if (rejected < 100) {
        if (auto bad = testing::corrupt(inst, rng)) {
          if (verify(bad->instance)) {
            note(id + ": accepted corruption '" + bad->what + "'");
          } else {
            ++rejected;
            ++corruptions;
          }
        }
      }
    }
    if (ok < 100 || rejected < 100) {
      note(id + ": only " + std::to_string(ok) + " roundtrips, " + std::to_string(rejected) + " corruptions");
    }
  }
  double s = seconds_since(t0);
  std::string detail = std::to_string(ids.size()) + " schemes, " + std::to_string(roundtrips) + " roundtrips, " +
                       std::to_string(corruptions) + " corruptions rejected, " + fmt("%.1f s", s);
  if (failures) detail += "; " + std::to_string(failures) + " failures, first: " + first_failure;
  return {failures == 0 && ids.size() >= 25 && s < 60.0, detail};
}

// 4. Fusion, duplicate elimination and NoOp replacement keep outputs.
Outcome transformation_semantics() {
  Rng rng(104);
  const auto i64 = ElementType::i(64);
  auto identity = testing::derivative_identity_circuit(i64);
  std::size_t bad = 0, replacements = 0, merged = 0;
  std::string first;
  auto t0 = Clock::now();
  for (int k = 0; k < 200; ++k) {
    auto rc = testing::random_circuit(rng, 8 + static_cast<int>(rng() % 30));
    auto in = testing::random_circuit_inputs(rc.circuit, rng, 1 + rng() % 64);
    auto expected = evaluate_circuit(rc.circuit, in);
    auto check = [&](const Circuit& c, const std::string& what) {
      try {
        if (evaluate_circuit(c, in) == expected) return;
      } catch (const Error& e) {
        if (first.empty()) first = what + ": " + e.what();
      }
      if (first.empty()) first = what + " changed the outputs";
      ++bad;
    };
    std::size_t cut = 1 + rng() % rc.creation_order.size();
    std::set<std::string> prefix(rc.creation_order.begin(), rc.creation_order.begin() + cut);
    check(fuse_subcircuit(rc.circuit, prefix, "accept_fuse_" + std::to_string(k)), "fuse");
    auto dedup = eliminate_duplicate_vertices(rc.circuit);
    merged += rc.circuit.vertices().size() - dedup.vertices().size();
    check(dedup, "dedup");
    for (const auto& id : rc.noop_ids) {
      auto sub = induced_subcircuit(rc.circuit, {id});
      if (sub.inputs().size() != 1 || sub.outputs().size() != 1) continue;
      std::map<std::string, std::string> rho{{"col", sub.inputs().begin()->first},
                                             {"res", sub.outputs().begin()->first}};
      check(replace_subcircuit(rc.circuit, {id}, identity, rho), "replace");
      ++replacements;
    }
  }
  double s = seconds_since(t0);
  std::string detail = "200 circuits, " + std::to_string(merged) + " duplicates merged, " +
                       std::to_string(replacements) + " NoOp replacements, " + std::to_string(bad) +
                       " mismatches, " + fmt("%.1f s", s);
  if (!first.empty()) detail += "; first: " + first;
  return {bad == 0 && replacements > 0 && s < 30.0, detail};
}

// 5. Monte Carlo of the widest of four geometric widths.
Outcome geometric_max_width() {
  Rng rng(105);
  const int k = 4;
  const std::size_t groups = 1000000;
  const double p = 1.0 - std::pow(0.1, 1.0 / 8.0);
  auto w = synth::geometric_widths(rng, groups * k, ElementType::u(32), p);
  double sum_max = 0, sum_all = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    std::uint64_t m = 0;
    for (int j = 0; j < k; ++j) {
      std::uint64_t v = w.u64(g * k + j);
      sum_all += static_cast<double>(v);
      m = std::max(m, v);
    }
    sum_max += static_cast<double>(m);
  }
  double est_max = sum_max / static_cast<double>(groups);
  double est_mean = sum_all / static_cast<double>(groups * k);
  double closed = testing::expected_max_geometric(k, p);
  bool pass = std::abs(est_max - 7.738) <= 0.05 && std::abs(est_mean - 1.0 / p) <= 0.01 &&
              std::abs(closed - 7.738) <= 0.001;
  return {pass, "E[W_max] ~ " + fmt("%.4f", est_max) + " (closed form " + fmt("%.4f", closed) + "), E[W] ~ " +
                    fmt("%.4f", est_mean) + " (1/p = " + fmt("%.4f", 1.0 / p) + ")"};
}

// 6. Size of the upper-half index-set encoding on n = 2^16.
Outcome upper_half_bound() {
  Rng rng(106);
  const int w = 16;
  const std::uint64_t n = 1ull << w;
  const double root = std::sqrt(static_cast<double>(n));
  bool hard_ok = true, ratio_ok = true;
  std::ostringstream detail;
  for (int factor : {8, 10, 16}) {
    auto m = static_cast<std::size_t>(factor * root);
    double worst_margin = 1e300, bits_total = 0;
    int strictly_below = 0;
    for (int s = 0; s < 50; ++s) {
      auto elems = testing::random_subset(rng, n, m);
      ColumnFamily in{{"full_length", Column::from_u64(ElementType::u(32), {n})},
                      {"elements", Column::from_u64(ElementType::u(32), elems)}};
      auto inst = encode("idx.common_upper_half", {{"w", w}}, in);
      auto bits = static_cast<double>(testing::index_set_bits(inst));
      double bound = (static_cast<double>(m) / 2 + root) * w;
      worst_margin = std::min(worst_margin, bound - bits);
      bits_total += bits;
      if (bits / static_cast<double>(m) < 0.6 * w) ++strictly_below;
    }
    double mean_bpe = bits_total / (50.0 * static_cast<double>(m));
    if (worst_margin < 0) hard_ok = false;
    if (factor >= 10 && !(mean_bpe < 0.6 * w)) ratio_ok = false;
    detail << "m=" << factor << "sqrt(n): min slack " << worst_margin << " bits, mean "
           << fmt("%.4f", mean_bpe) << " bits/elem, " << strictly_below << "/50 below 0.6w; ";
  }
  return {hard_ok && ratio_ok, detail.str()};
}

// 7. Sums on run-length forms and equality selects on dictionary indices.
Outcome pushdown() {
  Rng rng(107);
  std::size_t bad = 0;
  auto t0 = Clock::now();
  for (int k = 0; k < 100; ++k) {
    auto col = synth::runs(rng, 1 + rng() % 2000, ElementType::i(32), 6.0, 40);
    auto inst = encode("run.rle", json::object(), col);
    i128 materialized = 0;
    for (auto v : decode_column(inst).integers()) materialized += v;
    if (rle_sum(inst) != materialized) ++bad;
  }
  for (int k = 0; k < 100; ++k) {
    auto col = synth::zipf(rng, 1 + rng() % 2000, ElementType::u(16), 50, 1.1);
    auto inst = encode("dict.unique", json::object(), col);
    auto v = Value::of_int(static_cast<i128>(rng() % 60));
    auto decoded = decode_column(inst);
    std::vector<bool> want(decoded.size());
    for (std::size_t i = 0; i < decoded.size(); ++i) want[i] = decoded.value(i) == v;
    if (dict_select_eq(inst, v) != Column::from_bits(want)) ++bad;
  }
  double s = seconds_since(t0);
  return {bad == 0 && s < 10.0, "200 instances, " + std::to_string(bad) + " mismatches, " + fmt("%.2f s", s)};
}

// 8. One patch in the delta column against k patches after decompression.
Outcome patched_delta_witness() {
  const int k = 4;
  const std::int64_t m = 127;
  std::vector<std::int64_t> v(k, 0);
  v.insert(v.end(), k, (k + 1) * m);
  auto col = Column::from_i64(ElementType::i(64), v);
  auto inst = encode("delta.patched", {{"segment_length", 8}, {"delta_type", "i8"}}, col);
  auto ints = col.integers();
  std::size_t stored = patch_count(inst);
  std::size_t compressed = testing::min_compressed_patches(ints, 8);
  std::size_t decompressed = testing::min_decompressed_patches(ints, 8);
  bool roundtrip = decode_column(inst) == col;
  return {roundtrip && stored == 1 && compressed == 1 && decompressed >= static_cast<std::size_t>(k),
          "encoder patches " + std::to_string(stored) + ", minimal compressed-domain " +
              std::to_string(compressed) + ", minimal decompressed-domain " + std::to_string(decompressed)};
}

// 9. Sizes and ratios of hand-built bundles against closed forms.
Outcome size_formulas() {
  Rng rng(109);
  auto dir = std::filesystem::temp_directory_path() / "colcirc_acceptance_bundle";
  const std::vector<ElementType> types{ElementType::u(8), ElementType::u(16), ElementType::u(32),
                                       ElementType::i(64)};
  std::size_t bad = 0;
  auto bw = [](const ElementType& t) { return static_cast<std::uint64_t>(t.byte_width()); };
  for (int k = 0; k < 20; ++k) {
    const ElementType& t = types[rng() % types.size()];
    const ElementType idx = k % 2 ? ElementType::u(8) : ElementType::u(32);
    std::uint64_t n = 0, encoded = 0;
    SchemeInstance inst;
    switch (k % 4) {
      case 0: {  // constant
        n = 1 + rng() % 5000;
        inst = {"constant", json::object(),
                {{"value", Column::from_u64(t, {rng() % 100})}, {"length", Column::from_u64(ElementType::u(32), {n})}}};
        encoded = bw(t) + 4;
        break;
      }
      case 1: {  // run-length
        std::size_t r = 1 + rng() % 40;
        std::vector<std::uint64_t> vals(r), lens(r);
        for (std::size_t i = 0; i < r; ++i) {
          vals[i] = rng() % 100;
          lens[i] = 1 + rng() % 200;
          n += lens[i];
        }
        inst = {"run.rle", json::object(), {{"value", Column::from_u64(t, vals)}, {"length", Column::from_u64(idx, lens)}}};
        encoded = r * bw(t) + r * bw(idx);
        break;
      }
      case 2: {  // dictionary
        std::size_t d = 1 + rng() % 50;
        n = rng() % 3000;
        std::vector<std::uint64_t> dict(d), ind(n);
        for (std::size_t i = 0; i < d; ++i) dict[i] = i;
        for (auto& x : ind) x = rng() % d;
        inst = {"dict", json::object(), {{"dictionary", Column::from_u64(t, dict)}, {"indices", Column::from_u64(idx, ind)}}};
        encoded = d * bw(t) + n * bw(idx);
        break;
      }
      default: {  // frame of reference
        std::uint64_t l = 1 + rng() % 64;
        n = rng() % 3000;
        std::size_t segs = (n + l - 1) / l;
        std::vector<std::uint64_t> refs(segs), offs(n);
        for (auto& x : refs) x = rng() % 50;
        for (auto& x : offs) x = rng() % 50;
        inst = {"for", {{"type", t.to_string()}},
                {{"segment_length", Column::from_u64(ElementType::u(32), {l})},
                 {"reference", Column::from_u64(t, refs)},
                 {"offsets", Column::from_u64(ElementType::u(8), offs)}}};
        encoded = 4 + segs * bw(t) + n;
        break;
      }
    }
    std::filesystem::remove_all(dir);
    write_bundle(dir, inst);
    auto back = read_bundle(dir);
    std::uint64_t decoded = n * bw(t);
    auto ratio = compression_ratio(back);
    if (representation_size_bytes(back.columns) != encoded || ratio.encoded_bytes != encoded ||
        ratio.decoded_bytes != decoded ||
        ratio.value() != static_cast<double>(decoded) / static_cast<double>(encoded)) {
      ++bad;
    }
  }
  std::filesystem::remove_all(dir);
  return {bad == 0, "20 bundles, " + std::to_string(bad) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 affine circuit fidelity", affine_fidelity},
      {"2 revenue query oracle", q6_oracle},
      {"3 universal roundtrip", universal_roundtrip},
      {"4 transformation semantics", transformation_semantics},
      {"5 geometric max-width expectation", geometric_max_width},
      {"6 upper-half index set size bound", upper_half_bound},
      {"7 compressed-form pushdown", pushdown},
      {"8 patched delta witness", patched_delta_witness},
      {"9 size and ratio formulas", size_formulas},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
