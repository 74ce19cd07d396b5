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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lbpl/corpus.hpp"
#include "lbpl/crf_state.hpp"
#include "lbpl/rng.hpp"

namespace lbpl {

/// Deliberate kernel defects, used only to show that the correctness tests
/// can detect a broken sampler.
enum class InjectedFault {
  kNone,
  /// Existing-table weights use the occupancy including the token being
  /// resampled (s_dt instead of s_dt minus the token).
  kStaleOccupancy,
};

struct SweepOptions {
  /// Resample gamma and alpha at the end of every sweep.
  bool resample_concentrations = true;
  InjectedFault fault = InjectedFault::kNone;
};

struct ChainConfig {
  std::size_t max_iter = 3000;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  /// Audit the state every this many sweeps; 0 disables auditing.
  std::size_t audit_every = 0;
  SweepOptions sweep;

  /// Throws std::invalid_argument unless burn_in < max_iter.
  void validate() const;
};

struct TraceRecord {
  std::size_t iter = 0;
  std::size_t num_dishes = 0;
  std::size_t num_tables = 0;
  double gamma = 0.0;
  double alpha = 0.0;
  double log_joint = 0.0;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using ChainTrace = std::vector<TraceRecord>;

/// Result of sampling a seat for one token: an existing table, or kNew with
/// the dish of the new table (an existing dish id or kNew).
struct TableDraw {
  TableId table = kNone;
  DishId dish = kNone;
};

/// Unnormalized seating weights for a token of topic y in a document with
/// `tables`, given per-dish predictives f_k = p(y | dish k) and f_new.
/// Writes T_d + 1 entries to `out`; the last is the new-table weight
///   alpha * (sum_k m_k f_k + gamma f_new) / (M + gamma),
/// or alpha * m_c f_c / (M + gamma) when the document is clamped to dish c.
void table_weights(std::span<const Table> tables,
                   std::span<const std::uint32_t> tables_per_dish,
                   std::size_t total_tables, double gamma, double alpha,
                   std::span<const double> dish_predictive, double new_dish_predictive,
                   DishId clamp, std::vector<double>& out,
                   InjectedFault fault = InjectedFault::kNone);

/// Log weights for re-dishing a detached table: log m_k + block_k for every
/// dish slot (-inf where m_k == 0) and log gamma + block_new in the last slot.
void dish_log_weights(std::span<const std::uint32_t> tables_per_dish, double gamma,
                      std::span<const double> block_log_predictive,
                      double new_block_log_predictive, std::vector<double>& out);

/// Collapsed Gibbs kernels over a CrfState. Holds scratch buffers only, so
/// one instance per chain is enough.
class GibbsSampler {
 public:
  explicit GibbsSampler(SweepOptions options = {}) : options_(options) {}

  /// Seat for a detached token of topic `topic` in document d.
  TableDraw sample_table(const CrfState& state, std::size_t d, TopicId topic, Rng& rng);

  /// Dish for detached table t of unclamped document d with topic histogram
  /// `counts`. Throws std::logic_error on a clamped document.
  DishId sample_dish(const CrfState& state, std::size_t d, const TopicCounts& counts,
                     Rng& rng);

  /// Topic for token (d, n) after unassign_topic.
  TopicId sample_topic(const CrfState& state, std::size_t d, std::size_t n, Rng& rng);

  /// One full pass in the order tables, dishes, topics, then concentrations.
  /// Randomness for sweep `iteration` comes from streams keyed by
  /// (seed, iteration, site).
  void sweep(CrfState& state, std::uint64_t seed, std::size_t iteration);

  const SweepOptions& options() const noexcept { return options_; }

 private:
  SweepOptions options_;
  std::vector<double> predictive_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

/// Draws gamma and alpha from their priors and seats every token
/// sequentially: topic uniform, table from the seating conditional given the
/// tokens seated so far. Labeled documents start clamped to pinned dishes.
CrfState init_state(const Corpus& corpus, const HyperParams& hypers, std::uint64_t seed);

struct ChainResult {
  CrfState state;
  ChainTrace trace;
};

/// Called after every sweep with the 1-based iteration number.
using SweepObserver = std::function<void(std::size_t, const CrfState&)>;

/// Thrown by run_chain when a scheduled audit fails.
class AuditFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ChainResult run_chain(const Corpus& corpus, const HyperParams& hypers,
                      const ChainConfig& config, const SweepObserver& observer = {});

/// Category of every document from the given state: labeled documents map to
/// their clamp; others to the dish serving most of their tokens, ties broken
/// by larger tables-per-dish and then smaller dish id. Empty documents map to
/// the dish with the most tables.
std::vector<CategoryId> assign_documents(const CrfState& state);

}  // namespace lbpl
