// Copyright 2026 The lbpl-ntm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace lbpl {

/// Keyed pseudo-random stream.
///
/// A stream is identified by a (seed, stream, site) triple; the key is mixed
/// through SplitMix64 into the state of a xoshiro256** generator. Two streams
/// with distinct keys are statistically independent for all practical
/// purposes, so a chain can derive one stream per (iteration, site) and stay
/// reproducible regardless of how many draws earlier sites consumed.
///
/// Satisfies std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0,
               std::uint64_t site = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1).
  double uniform() noexcept;

  /// Uniform double in (0, 1).
  double uniform_open() noexcept;

  /// Gamma(shape, scale) with density proportional to x^(shape-1) e^(-x/scale).
  double gamma(double shape, double scale);

  double beta(double a, double b);

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Index drawn proportionally to non-negative `weights`. The total must be
  /// strictly positive.
  std::size_t categorical(std::span<const double> weights) noexcept;

  /// Index drawn proportionally to exp(log_weights); normalized by
  /// max-subtraction so that arbitrarily small weights are safe.
  std::size_t categorical_log(std::span<const double> log_weights);

 private:
  std::uint64_t s_[4];
};

/// Seed for chain `chain` of a run started with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t chain) noexcept;

}  // namespace lbpl
