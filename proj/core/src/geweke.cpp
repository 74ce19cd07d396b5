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

#include "lbpl/geweke.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lbpl {
namespace {

enum Site : std::uint64_t {
  kSiteForward = 100,
  kSiteWords = 101,
};

// Gibbs pass over the words: w_dn ~ (beta_w + O_lw^-dn) / (sum beta + O_l^-dn).
void regenerate_words(CrfState& state, Rng& rng, std::vector<double>& weights) {
  const auto& beta = state.hypers().beta;
  const std::size_t P = state.vocab_size();
  weights.resize(P);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      const TopicId l = state.topic_of(d, n);
      const WordId current = state.word(d, n);
      for (std::size_t w = 0; w < P; ++w) {
        const double own = (w == current) ? 1.0 : 0.0;
        weights[w] = beta[w] + state.topic_word(l, static_cast<WordId>(w)) - own;
      }
      state.replace_word(d, n, static_cast<WordId>(rng.categorical(weights)));
    }
  }
}

}  // namespace

double GewekeStats::operator[](std::size_t i) const {
  switch (i) {
    case 0: return num_dishes;
    case 1: return num_tables;
    case 2: return mean_occupancy;
    case 3: return topic_entropy;
    default: throw std::out_of_range("GewekeStats index");
  }
}

GewekeStats geweke_statistics(const CrfState& state) {
  GewekeStats stats;
  stats.num_dishes = static_cast<double>(state.active_dishes());
  stats.num_tables = static_cast<double>(state.total_tables());
  const double tokens = static_cast<double>(state.num_tokens());
  stats.mean_occupancy = stats.num_tables > 0 ? tokens / stats.num_tables : 0.0;
  for (std::size_t l = 0; l < state.num_topics(); ++l) {
    const double c = static_cast<double>(state.topic_total(static_cast<TopicId>(l)));
    if (c > 0) stats.topic_entropy -= (c / tokens) * std::log(c / tokens);
  }
  return stats;
}

std::vector<GewekeStats> geweke_marginal_run(const GenSpec& spec, std::size_t samples,
                                             std::uint64_t seed) {
  std::vector<GewekeStats> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(seed, i, kSiteForward);
    const SyntheticCorpus draw = forward_sample(spec, rng);
    out.push_back(geweke_statistics(latent_state(draw, spec.hypers)));
  }
  return out;
}

std::vector<GewekeStats> geweke_successive_run(const GenSpec& spec, std::size_t samples,
                                               std::size_t thin, std::uint64_t seed,
                                               SweepOptions options) {
  if (thin == 0) throw std::invalid_argument("thin must be positive");
  if (spec.fixed_gamma.has_value() != spec.fixed_alpha.has_value()) {
    throw std::invalid_argument("fix both concentrations or neither");
  }
  options.resample_concentrations = !spec.fixed_gamma.has_value();

  Rng start_rng(seed, 0, kSiteForward);
  const SyntheticCorpus start = forward_sample(spec, start_rng);
  CrfState state = latent_state(start, spec.hypers);
  GibbsSampler sampler(options);
  std::vector<double> weights;
  std::vector<GewekeStats> out;
  out.reserve(samples);
  std::size_t step = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < thin; ++j) {
      ++step;
      sampler.sweep(state, seed, step);
      Rng word_rng(seed, step, kSiteWords);
      regenerate_words(state, word_rng, weights);
    }
    out.push_back(geweke_statistics(state));
  }
  return out;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double distance = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    distance = std::max(distance, std::abs(i / na - j / nb));
  }
  return distance;
}

double ks_p_value(double distance, double n_a, double n_b) {
  const double n = std::sqrt(n_a * n_b / (n_a + n_b));
  const double lambda = (n + 0.12 + 0.11 / n) * distance;
  if (lambda < 1e-3) return 1.0;
  // Kolmogorov survival function 2 sum (-1)^(j-1) exp(-2 j^2 lambda^2).
  double sum = 0.0;
  double sign = 1.0;
  double previous = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::abs(term) <= 1e-10 * previous || std::abs(term) <= 1e-12 * sum) {
      return std::clamp(sum, 0.0, 1.0);
    }
    sign = -sign;
    previous = std::abs(term);
  }
  return 1.0;  // series failed to converge: lambda is tiny
}

double integrated_autocorrelation_time(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) return 1.0;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= n;
  if (c0 <= 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t lag = 1; lag < n; ++lag) {
    double c = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) c += (series[t] - mean) * (series[t + lag] - mean);
    tau += 2.0 * (c / n) / c0;
    if (static_cast<double>(lag) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

std::vector<GewekeComparison> geweke_compare(std::span<const GewekeStats> marginal,
                                             std::span<const GewekeStats> successive) {
  if (marginal.empty() || successive.empty()) {
    throw std::invalid_argument("geweke_compare needs non-empty samples");
  }
  std::vector<GewekeComparison> report;
  std::vector<double> a(marginal.size());
  std::vector<double> b(successive.size());
  for (std::size_t s = 0; s < GewekeStats::kCount; ++s) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = marginal[i][s];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = successive[i][s];
    GewekeComparison row;
    row.statistic = GewekeStats::kNames[s];
    row.ks_distance = ks_distance(a, b);
    row.effective_a = static_cast<double>(a.size());
    row.effective_b = static_cast<double>(b.size()) / integrated_autocorrelation_time(b);
    row.p_value = ks_p_value(row.ks_distance, row.effective_a, row.effective_b);
    report.push_back(row);
  }
  return report;
}

}  // namespace lbpl
