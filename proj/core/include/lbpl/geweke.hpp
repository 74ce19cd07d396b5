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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lbpl/crf_state.hpp"
#include "lbpl/generative.hpp"
#include "lbpl/sampler.hpp"

namespace lbpl {

/// Summary of one joint draw used by the Geweke test.
struct GewekeStats {
  static constexpr std::size_t kCount = 4;
  static constexpr std::array<const char*, kCount> kNames = {
      "num_dishes", "num_tables", "mean_occupancy", "topic_entropy"};

  double num_dishes = 0.0;
  double num_tables = 0.0;
  double mean_occupancy = 0.0;
  double topic_entropy = 0.0;

  double operator[](std::size_t i) const;
};

GewekeStats geweke_statistics(const CrfState& state);

/// S independent forward draws of (latents, words). Sample i uses the
/// streams keyed by (seed, i).
std::vector<GewekeStats> geweke_marginal_run(const GenSpec& spec, std::size_t samples,
                                             std::uint64_t seed);

/// Successive-conditional chain: starting from one forward draw, alternate a
/// Gibbs sweep of the latents with a Gibbs pass over the words (each word
/// redrawn from its collapsed topic-word predictive), recording statistics
/// every `thin` steps. gamma and alpha stay fixed when fixed_gamma and
/// fixed_alpha are set and are resampled otherwise.
std::vector<GewekeStats> geweke_successive_run(const GenSpec& spec, std::size_t samples,
                                               std::size_t thin, std::uint64_t seed,
                                               SweepOptions options = {});

struct GewekeComparison {
  std::string statistic;
  double ks_distance = 0.0;
  double effective_a = 0.0;
  double effective_b = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov comparison of every statistic; the size of
/// `successive` is deflated by its integrated autocorrelation time.
/// Throws std::invalid_argument on empty input.
std::vector<GewekeComparison> geweke_compare(std::span<const GewekeStats> marginal,
                                             std::span<const GewekeStats> successive);

/// Integrated autocorrelation time with Sokal's adaptive window (c = 5).
/// Returns 1 for constant series.
double integrated_autocorrelation_time(std::span<const double> series);

/// Maximum distance between the two empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sided KS p-value for distance `distance` at effective
/// sample sizes n_a and n_b.
double ks_p_value(double distance, double n_a, double n_b);

}  // namespace lbpl
