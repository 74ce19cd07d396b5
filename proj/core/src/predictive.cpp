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

#include "lbpl/predictive.hpp"

#include <cmath>

namespace lbpl {

double category_predictive(const CrfState& state, TopicId l, DishId k) {
  const auto& zeta = state.hypers().zeta;
  const double zeta_sum = state.zeta_sum();
  if (k == kNew) return zeta[l] / zeta_sum;
  return (zeta[l] + state.dish_topic(k, l)) /
         (zeta_sum + static_cast<double>(state.dish_total(k)));
}

double table_block_log_predictive(const CrfState& state, const TopicCounts& counts,
                                  DishId k) {
  const auto& zeta = state.hypers().zeta;
  const double zeta_sum = state.zeta_sum();
  const bool fresh = (k == kNew);
  double log_p = 0.0;
  std::uint32_t size = 0;
  for (const auto& [l, c] : counts) {
    const double base = zeta[l] + (fresh ? 0.0 : state.dish_topic(k, l));
    for (std::uint32_t j = 0; j < c; ++j) log_p += std::log(base + j);
    size += c;
  }
  const double base_total = zeta_sum + (fresh ? 0.0 : static_cast<double>(state.dish_total(k)));
  for (std::uint32_t j = 0; j < size; ++j) log_p -= std::log(base_total + j);
  return log_p;
}

void topic_weights(const CrfState& state, std::size_t d, std::size_t n,
                   std::span<double> out) {
  const auto& hypers = state.hypers();
  const DishId k = state.tables(d)[state.table_of(d, n)].dish;
  const WordId w = state.word(d, n);
  const double beta_w = hypers.beta[w];
  const double beta_sum = state.beta_sum();
  const double category_norm =
      state.zeta_sum() + static_cast<double>(state.dish_total(k));
  const auto dish_row = state.dish_topic_row(k);
  for (std::size_t l = 0; l < hypers.num_topics; ++l) {
    const auto topic = static_cast<TopicId>(l);
    out[l] = (hypers.zeta[l] + dish_row[l]) / category_norm *
             (beta_w + state.topic_word(topic, w)) /
             (beta_sum + static_cast<double>(state.topic_total(topic)));
  }
}

}  // namespace lbpl
