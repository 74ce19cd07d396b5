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

#include "lbpl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lbpl/concentration.hpp"
#include "lbpl/predictive.hpp"

namespace lbpl {
namespace {

enum Site : std::uint64_t {
  kSiteTables = 0,
  kSiteDishes = 1,
  kSiteTopics = 2,
  kSiteConcentrations = 3,
};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

void ChainConfig::validate() const {
  if (max_iter == 0) throw std::invalid_argument("max_iter must be positive");
  if (burn_in >= max_iter) throw std::invalid_argument("burn_in must be < max_iter");
}

void table_weights(std::span<const Table> tables,
                   std::span<const std::uint32_t> tables_per_dish,
                   std::size_t total_tables, double gamma, double alpha,
                   std::span<const double> dish_predictive, double new_dish_predictive,
                   DishId clamp, std::vector<double>& out, InjectedFault fault) {
  out.resize(tables.size() + 1);
  const double stale = (fault == InjectedFault::kStaleOccupancy) ? 1.0 : 0.0;
  for (std::size_t t = 0; t < tables.size(); ++t) {
    out[t] = (tables[t].occupancy + stale) * dish_predictive[tables[t].dish];
  }
  const double norm = static_cast<double>(total_tables) + gamma;
  double fresh = 0.0;
  if (clamp != kNone) {
    // Only the clamp dish is allowed; an empty pinned dish is re-opened as new.
    const double m = tables_per_dish[clamp];
    fresh = (m > 0 ? m : gamma) * dish_predictive[clamp];
  } else {
    for (std::size_t k = 0; k < tables_per_dish.size(); ++k) {
      fresh += tables_per_dish[k] * dish_predictive[k];
    }
    fresh += gamma * new_dish_predictive;
  }
  out.back() = alpha * fresh / norm;
}

void dish_log_weights(std::span<const std::uint32_t> tables_per_dish, double gamma,
                      std::span<const double> block_log_predictive,
                      double new_block_log_predictive, std::vector<double>& out) {
  out.resize(tables_per_dish.size() + 1);
  for (std::size_t k = 0; k < tables_per_dish.size(); ++k) {
    out[k] = tables_per_dish[k] > 0
                 ? std::log(static_cast<double>(tables_per_dish[k])) + block_log_predictive[k]
                 : kNegInf;
  }
  out.back() = std::log(gamma) + new_block_log_predictive;
}

TableDraw GibbsSampler::sample_table(const CrfState& state, std::size_t d, TopicId topic,
                                     Rng& rng) {
  const std::size_t K = state.num_dishes();
  predictive_.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    predictive_[k] = category_predictive(state, topic, static_cast<DishId>(k));
  }
  const double fresh_predictive = category_predictive(state, topic, kNew);
  const auto tables = state.tables(d);
  table_weights(tables, state.tables_per_dish(), state.total_tables(), state.gamma(),
                state.alpha(), predictive_, fresh_predictive, state.clamp(d), weights_,
                options_.fault);

  const std::size_t choice = rng.categorical(weights_);
  if (choice < tables.size()) return {static_cast<TableId>(choice), kNone};
  if (state.is_clamped(d)) return {kNew, state.clamp(d)};

  // Dish of the new table: m_k f_k for existing dishes, gamma f_new for a new one.
  weights_.resize(K + 1);
  for (std::size_t k = 0; k < K; ++k) {
    weights_[k] = state.tables_per_dish(static_cast<DishId>(k)) * predictive_[k];
  }
  weights_[K] = state.gamma() * fresh_predictive;
  const std::size_t dish = rng.categorical(weights_);
  return {kNew, dish == K ? kNew : static_cast<DishId>(dish)};
}

DishId GibbsSampler::sample_dish(const CrfState& state, std::size_t d,
                                 const TopicCounts& counts, Rng& rng) {
  if (state.is_clamped(d)) {
    throw std::logic_error("sample_dish called on a clamped document");
  }
  const std::size_t K = state.num_dishes();
  predictive_.resize(K);
  for (std::size_t k = 0; k < K; ++k) {
    predictive_[k] = state.tables_per_dish(static_cast<DishId>(k)) > 0
                         ? table_block_log_predictive(state, counts, static_cast<DishId>(k))
                         : 0.0;
  }
  dish_log_weights(state.tables_per_dish(), state.gamma(), predictive_,
                   table_block_log_predictive(state, counts, kNew), log_weights_);
  const std::size_t choice = rng.categorical_log(log_weights_);
  return choice == K ? kNew : static_cast<DishId>(choice);
}

TopicId GibbsSampler::sample_topic(const CrfState& state, std::size_t d, std::size_t n,
                                   Rng& rng) {
  weights_.resize(state.num_topics());
  topic_weights(state, d, n, weights_);
  return static_cast<TopicId>(rng.categorical(weights_));
}

void GibbsSampler::sweep(CrfState& state, std::uint64_t seed, std::size_t iteration) {
  Rng table_rng(seed, iteration, kSiteTables);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      const TokenDetach removed = state.detach_token(d, n);
      const TableDraw draw = sample_table(state, d, removed.topic, table_rng);
      state.attach_token(d, n, draw.table, draw.dish, removed.topic);
    }
  }

  Rng dish_rng(seed, iteration, kSiteDishes);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    if (state.is_clamped(d)) continue;
    const auto counts = state.table_topic_counts(d);
    for (std::size_t t = 0; t < counts.size(); ++t) {
      const auto table = static_cast<TableId>(t);
      state.detach_table(d, table, counts[t]);
      const DishId dish = sample_dish(state, d, counts[t], dish_rng);
      state.attach_table(d, table, dish, counts[t]);
    }
  }

  Rng topic_rng(seed, iteration, kSiteTopics);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      state.unassign_topic(d, n);
      state.assign_topic(d, n, sample_topic(state, d, n, topic_rng));
    }
  }

  if (options_.resample_concentrations) {
    Rng conc_rng(seed, iteration, kSiteConcentrations);
    state.set_gamma(sample_gamma(state, conc_rng));
    state.set_alpha(sample_alpha(state, conc_rng));
  }
}

CrfState init_state(const Corpus& corpus, const HyperParams& hypers, std::uint64_t seed) {
  hypers.validate(corpus.vocab_size());
  Rng prior_rng(seed, 0, kSiteConcentrations);
  const double gamma = prior_rng.gamma(hypers.a_gamma, hypers.b_gamma);
  const double alpha = prior_rng.gamma(hypers.a_alpha, hypers.b_alpha);
  CrfState state(corpus, hypers, gamma, alpha);

  GibbsSampler sampler;
  Rng rng(seed, 0, kSiteTables);
  const auto L = static_cast<double>(hypers.num_topics);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      auto topic = static_cast<TopicId>(rng.uniform() * L);
      topic = std::min<TopicId>(topic, static_cast<TopicId>(hypers.num_topics - 1));
      const TableDraw draw = sampler.sample_table(state, d, topic, rng);
      state.attach_token(d, n, draw.table, draw.dish, topic);
    }
  }
  return state;
}

ChainResult run_chain(const Corpus& corpus, const HyperParams& hypers,
                      const ChainConfig& config, const SweepObserver& observer) {
  config.validate();
  ChainResult result{init_state(corpus, hypers, config.seed), {}};
  result.trace.reserve(config.max_iter);
  GibbsSampler sampler(config.sweep);
  for (std::size_t iter = 1; iter <= config.max_iter; ++iter) {
    sampler.sweep(result.state, config.seed, iter);
    if (config.audit_every > 0 && iter % config.audit_every == 0) {
      const AuditReport report = audit(result.state, corpus);
      if (!report) {
        throw AuditFailure("audit failed after sweep " + std::to_string(iter) + ": " +
                           report.summary());
      }
    }
    result.trace.push_back({iter, result.state.active_dishes(), result.state.total_tables(),
                            result.state.gamma(), result.state.alpha(),
                            result.state.log_joint()});
    if (observer) observer(iter, result.state);
  }
  return result;
}

std::vector<CategoryId> assign_documents(const CrfState& state) {
  const std::size_t K = state.num_dishes();
  auto better = [&state](DishId a, std::uint64_t votes_a, DishId b, std::uint64_t votes_b) {
    if (votes_a != votes_b) return votes_a > votes_b;
    if (state.tables_per_dish(a) != state.tables_per_dish(b)) {
      return state.tables_per_dish(a) > state.tables_per_dish(b);
    }
    return a < b;
  };

  DishId popular = 0;
  for (DishId k = 1; k < K; ++k) {
    if (better(k, 0, popular, 0)) popular = k;
  }

  std::vector<CategoryId> assignment(state.num_documents(), 0);
  std::vector<std::uint64_t> votes(K);
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    if (state.is_clamped(d)) {
      assignment[d] = static_cast<CategoryId>(state.clamp(d));
      continue;
    }
    if (state.doc_size(d) == 0 || K == 0) {
      assignment[d] = static_cast<CategoryId>(popular);
      continue;
    }
    std::fill(votes.begin(), votes.end(), 0);
    for (const Table& table : state.tables(d)) votes[table.dish] += table.occupancy;
    DishId best = state.tables(d).front().dish;
    for (DishId k = 0; k < K; ++k) {
      if (votes[k] > 0 && better(k, votes[k], best, votes[best])) best = k;
    }
    assignment[d] = static_cast<CategoryId>(best);
  }
  return assignment;
}

}  // namespace lbpl
