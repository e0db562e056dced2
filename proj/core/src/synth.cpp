#include "colcirc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "colcirc/error.hpp"

namespace colcirc::synth {

namespace {

i128 clamp_to(const ElementType& t, i128 v) {
  return std::min(std::max(v, t.min_value()), t.max_value());
}

std::int64_t draw(Rng& rng, i128 lo, i128 hi) {
  std::uniform_int_distribution<std::int64_t> d(static_cast<std::int64_t>(lo),
                                                static_cast<std::int64_t>(hi));
  return d(rng);
}

}  // namespace

Column uniform(Rng& rng, std::size_t n, const ElementType& type, i128 lo, i128 hi) {
  lo = clamp_to(type, lo);
  hi = clamp_to(type, hi);
  // Keep inside int64 for the distribution; u64 draws above 2^63 use raw bits.
  ColumnBuilder b(type, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (hi > static_cast<i128>(INT64_MAX)) {
      std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
      std::uint64_t r = span == UINT64_MAX ? rng() : rng() % (span + 1);
      b.push_int(lo + r);
    } else {
      b.push_int(draw(rng, lo, hi));
    }
  }
  return b.finish();
}

Column runs(Rng& rng, std::size_t n, const ElementType& type, double mean_run,
            std::uint64_t distinct) {
  require(mean_run >= 1.0 && distinct >= 1, Errc::invalid_argument, "runs: bad parameters");
  std::geometric_distribution<std::uint64_t> len(1.0 / mean_run);
  ColumnBuilder b(type, n);
  i128 hi = std::min<i128>(type.max_value(), type.min_value() + static_cast<i128>(distinct) - 1);
  while (b.size() < n) {
    std::uint64_t l = 1 + len(rng);
    i128 v = draw(rng, std::max<i128>(type.min_value(), INT64_MIN), std::min<i128>(hi, static_cast<i128>(INT64_MAX)));
    for (std::uint64_t k = 0; k < l && b.size() < n; ++k) b.push_int(v);
  }
  return b.finish();
}

Column zipf(Rng& rng, std::size_t n, const ElementType& type, std::uint64_t distinct, double s) {
  require(distinct >= 1, Errc::invalid_argument, "zipf: needs at least one value");
  std::vector<double> weights(distinct);
  for (std::uint64_t k = 0; k < distinct; ++k) weights[k] = 1.0 / std::pow(static_cast<double>(k + 1), s);
  std::discrete_distribution<std::uint64_t> pick(weights.begin(), weights.end());
  // Ranks map to scattered values so the frequent ones are not simply the small ones.
  std::vector<i128> values(distinct);
  i128 span = type.max_value() - type.min_value();
  for (std::uint64_t k = 0; k < distinct; ++k) {
    values[k] = type.min_value() + static_cast<i128>((static_cast<unsigned __int128>(k) * 2654435761u) %
                                                     (static_cast<unsigned __int128>(span) + 1));
  }
  ColumnBuilder b(type, n);
  for (std::size_t i = 0; i < n; ++i) b.push_int(values[pick(rng)]);
  return b.finish();
}

Column noisy_linear(Rng& rng, std::size_t n, const ElementType& type, std::int64_t intercept,
                    std::int64_t slope, std::int64_t noise) {
  ColumnBuilder b(type, n);
  for (std::size_t i = 0; i < n; ++i) {
    i128 v = intercept + static_cast<i128>(slope) * static_cast<i128>(i) + draw(rng, -noise, noise);
    b.push_int(clamp_to(type, v));
  }
  return b.finish();
}

Column geometric_widths(Rng& rng, std::size_t n, const ElementType& type, double p) {
  std::geometric_distribution<std::uint64_t> g(p);
  ColumnBuilder b(type, n);
  for (std::size_t i = 0; i < n; ++i) b.push_int(clamp_to(type, 1 + static_cast<i128>(g(rng))));
  return b.finish();
}

Column permutation(Rng& rng, std::size_t n, const ElementType& type) {
  std::vector<std::uint64_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return Column::from_u64(type, p);
}

Column generate(const std::string& kind, std::size_t n, const ElementType& type,
                std::uint64_t seed, const json& o) {
  Rng rng(seed);
  require(type.is_integer(), Errc::invalid_argument, "generators produce integer columns");
  if (kind == "uniform") {
    i128 lo = o.contains("lo") ? static_cast<i128>(o["lo"].get<std::int64_t>()) : type.min_value();
    i128 hi = o.contains("hi") ? static_cast<i128>(o["hi"].get<std::int64_t>()) : type.max_value();
    return uniform(rng, n, type, lo, hi);
  }
  if (kind == "runs") return runs(rng, n, type, o.value("mean_run", 8.0), o.value("distinct", 16u));
  if (kind == "zipf") return zipf(rng, n, type, o.value("distinct", 64u), o.value("s", 1.2));
  if (kind == "noisy-linear") {
    return noisy_linear(rng, n, type, o.value("intercept", 1000), o.value("slope", 3),
                        o.value("noise", 5));
  }
  if (kind == "geometric") return geometric_widths(rng, n, type, o.value("p", 0.25));
  fail(Errc::invalid_argument, "unknown generator kind '" + kind + "'");
}

}  // namespace colcirc::synth
