#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "colcirc/column.hpp"
#include "colcirc/operator.hpp"

// Seeded synthetic column generators for tests, benchmarks and `colcirc gen`.
namespace colcirc::synth {

using Rng = std::mt19937_64;

// Uniform integers in [lo, hi] (clamped to the type's domain).
Column uniform(Rng& rng, std::size_t n, const ElementType& type, i128 lo, i128 hi);
// Runs of geometric length with the given mean over `distinct` values.
Column runs(Rng& rng, std::size_t n, const ElementType& type, double mean_run,
            std::uint64_t distinct);
// Zipf-skewed draws from `distinct` values with exponent s.
Column zipf(Rng& rng, std::size_t n, const ElementType& type, std::uint64_t distinct, double s);
// intercept + slope * i + uniform noise in [-noise, noise].
Column noisy_linear(Rng& rng, std::size_t n, const ElementType& type, std::int64_t intercept,
                    std::int64_t slope, std::int64_t noise);
// Geometric element widths with success probability p, at least 1.
Column geometric_widths(Rng& rng, std::size_t n, const ElementType& type, double p);
// Random permutation of 0..n-1.
Column permutation(Rng& rng, std::size_t n, const ElementType& type);

// Dispatch by kind: "uniform", "runs", "zipf", "noisy-linear", "geometric".
Column generate(const std::string& kind, std::size_t n, const ElementType& type,
                std::uint64_t seed, const json& options = json::object());

}  // namespace colcirc::synth
