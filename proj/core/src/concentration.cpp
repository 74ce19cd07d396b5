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

#include "lbpl/concentration.hpp"

#include <cmath>
#include <vector>

#include "lbpl/crf_state.hpp"

namespace lbpl {

double sample_top_concentration(double gamma, std::size_t num_dishes,
                                std::size_t num_tables, double shape, double scale,
                                Rng& rng) {
  if (num_tables == 0) return rng.gamma(shape, scale);
  const double K = static_cast<double>(num_dishes);
  const double M = static_cast<double>(num_tables);
  const double eta = rng.beta(gamma + 1.0, M);
  const double rate = 1.0 / scale - std::log(eta);
  // Mixture weights (a + K - 1) : M * rate.
  const double odds = (shape + K - 1.0) / (M * rate);
  const double pick_upper = odds / (1.0 + odds);
  const double mixture_shape = rng.bernoulli(pick_upper) ? shape + K : shape + K - 1.0;
  return rng.gamma(mixture_shape, 1.0 / rate);
}

double sample_doc_concentration(double alpha, std::span<const std::size_t> doc_sizes,
                                std::span<const std::size_t> doc_tables, double shape,
                                double scale, Rng& rng) {
  double sum_log_w = 0.0;
  double sum_s = 0.0;
  double tables = 0.0;
  for (std::size_t d = 0; d < doc_sizes.size(); ++d) {
    const double n = static_cast<double>(doc_sizes[d]);
    if (doc_sizes[d] == 0) continue;
    sum_log_w += std::log(rng.beta(alpha + 1.0, n));
    if (rng.bernoulli(n / (n + alpha))) sum_s += 1.0;
    tables += static_cast<double>(doc_tables[d]);
  }
  const double rate = 1.0 / scale - sum_log_w;
  return rng.gamma(shape + tables - sum_s, 1.0 / rate);
}

double sample_gamma(const CrfState& state, Rng& rng) {
  return sample_top_concentration(state.gamma(), state.active_dishes(), state.total_tables(),
                                  state.hypers().a_gamma, state.hypers().b_gamma, rng);
}

double sample_alpha(const CrfState& state, Rng& rng) {
  std::vector<std::size_t> sizes(state.num_documents());
  std::vector<std::size_t> tables(state.num_documents());
  for (std::size_t d = 0; d < sizes.size(); ++d) {
    sizes[d] = state.doc_size(d);
    tables[d] = state.num_tables(d);
  }
  return sample_doc_concentration(state.alpha(), sizes, tables, state.hypers().a_alpha,
                                  state.hypers().b_alpha, rng);
}

}  // namespace lbpl
