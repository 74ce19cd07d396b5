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

#include <span>
#include <vector>

#include "lbpl/crf_state.hpp"

namespace lbpl {

/// Posterior predictive probability that a token of dish `k` (or kNew) takes
/// topic `l`, with the dish-level topic distribution integrated out:
///   (zeta_l + O_kl) / sum_l' (zeta_l' + O_kl')   for an existing dish,
///   zeta_l / sum_l' zeta_l'                        for a new dish.
/// The caller must have removed the token in question from the counts.
double category_predictive(const CrfState& state, TopicId l, DishId k);

/// Joint log predictive of a whole table's topic histogram under dish `k`
/// (or kNew): the Dirichlet-multinomial (Polya urn) ascending-factorial
/// product, evaluated in log space. The table must already be detached.
double table_block_log_predictive(const CrfState& state, const TopicCounts& counts,
                                  DishId k);

/// Unnormalized topic weights for token (d, n), which must have been removed
/// with unassign_topic:
///   w_l = (zeta_l + O_kl) / sum(zeta + O_k) * (beta_w + O_lw) / sum(beta + O_l)
/// where k is the dish of the token's table. `out` must have num_topics slots.
void topic_weights(const CrfState& state, std::size_t d, std::size_t n,
                   std::span<double> out);

}  // namespace lbpl
