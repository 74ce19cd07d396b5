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
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lbpl/corpus.hpp"

namespace lbpl {

/// Fixed model inputs. Gamma priors use the shape/scale convention:
/// density proportional to x^(a-1) exp(-x/b).
struct HyperParams {
  std::size_t num_topics = 128;
  std::vector<double> zeta;  // base Dirichlet over topics, length num_topics
  std::vector<double> beta;  // topic-word Dirichlet, length vocab size
  double a_gamma = 1.0;
  double b_gamma = 0.001;
  double a_alpha = 5.0;
  double b_alpha = 0.1;

  /// Symmetric priors with the published default settings.
  static HyperParams defaults(std::size_t vocab_size, std::size_t num_topics = 128,
                              double zeta = 1.0, double beta = 0.01);

  /// Throws std::invalid_argument unless every entry is strictly positive,
  /// num_topics >= 2 and the vectors have matching lengths.
  void validate(std::size_t vocab_size) const;

  double zeta_sum() const;
  double beta_sum() const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

using DishId = std::uint32_t;
using TableId = std::uint32_t;
using TopicId = std::uint32_t;

inline constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
/// Passed as a table or dish choice to request a fresh one.
inline constexpr std::uint32_t kNew = kNone - 1;

struct Table {
  DishId dish = kNone;
  std::uint32_t occupancy = 0;
  friend bool operator==(const Table&, const Table&) = default;
};

/// What detach_token removed, sufficient to undo it exactly.
struct TokenDetach {
  TableId table = kNone;
  DishId dish = kNone;
  TopicId topic = kNone;
  bool table_removed = false;
  bool dish_removed = false;
};

/// What detach_table removed from the dish-level counts.
struct TableDetach {
  DishId dish = kNone;
  bool dish_removed = false;
};

/// Sparse topic histogram of one table's tokens.
using TopicCounts = std::vector<std::pair<TopicId, std::uint32_t>>;

/// Chinese-restaurant-franchise latent state with its sufficient statistics.
///
/// Documents are restaurants, tokens are customers, dishes are categories.
/// Every token carries a table index and a topic; every table carries a dish.
/// The count tables (table occupancy, tables per dish, dish-by-topic and
/// topic-by-word counts) are maintained incrementally.
///
/// Emptied tables and dishes are removed by swapping the last one into the
/// freed slot, so table ids are always 0..T_d-1 and dish ids 0..K-1. The
/// first num_pinned() dishes correspond to known categories: they are never
/// removed and every table of a clamped (labeled) document must serve the
/// document's clamp dish.
class CrfState {
 public:
  /// Empty state: no token attached, one pinned dish per known category of
  /// `corpus`, labeled documents clamped to their category's dish.
  CrfState(const Corpus& corpus, HyperParams hypers, double gamma, double alpha);

  /// Rebuilds all counts from explicit assignments. `table_dishes[d][t]` is
  /// the dish of table t in document d. Throws std::invalid_argument when the
  /// assignments are inconsistent (dangling table, empty table, gap in dish
  /// ids, clamp violation).
  static CrfState from_assignments(const Corpus& corpus, HyperParams hypers,
                                   double gamma, double alpha,
                                   const std::vector<std::vector<TableId>>& token_tables,
                                   const std::vector<std::vector<DishId>>& table_dishes,
                                   const std::vector<std::vector<TopicId>>& token_topics);

  // Token-level moves.

  /// Removes token (d, n) from its table and from the topic counts.
  /// Throws std::logic_error if the token is not attached.
  TokenDetach detach_token(std::size_t d, std::size_t n);

  /// Seats token (d, n) with `topic` at `table` (an existing table of d or
  /// kNew). For a new table `dish` is an existing dish or kNew. Returns the
  /// table id used. Throws std::logic_error if d is clamped and the new
  /// table's dish differs from the clamp.
  TableId attach_token(std::size_t d, std::size_t n, TableId table, DishId dish,
                       TopicId topic);

  /// Exact inverse of the detach that produced `record`.
  void undo_detach(std::size_t d, std::size_t n, const TokenDetach& record);

  /// Removes only the topic contribution of token (d, n); its table is kept.
  void unassign_topic(std::size_t d, std::size_t n);
  void assign_topic(std::size_t d, std::size_t n, TopicId topic);

  // Table-level moves.

  /// Per-table topic histograms of document d, indexed by table id.
  std::vector<TopicCounts> table_topic_counts(std::size_t d) const;

  /// Detaches table t of document d (with topic histogram `counts`) from its
  /// dish, leaving the table dish-less.
  TableDetach detach_table(std::size_t d, TableId t, const TopicCounts& counts);

  /// Gives a dish-less table a dish (existing id or kNew); returns the dish.
  DishId attach_table(std::size_t d, TableId t, DishId dish, const TopicCounts& counts);

  /// Replaces the word of token (d, n), moving its topic-word count.
  void replace_word(std::size_t d, std::size_t n, WordId word);

  // Read access.

  const HyperParams& hypers() const noexcept { return hypers_; }
  double zeta_sum() const noexcept { return zeta_sum_; }
  double beta_sum() const noexcept { return beta_sum_; }
  std::size_t num_topics() const noexcept { return hypers_.num_topics; }
  std::size_t vocab_size() const noexcept { return vocab_size_; }
  std::size_t num_documents() const noexcept { return words_.size(); }
  std::size_t doc_size(std::size_t d) const { return words_[d].size(); }
  std::size_t num_tokens() const noexcept { return num_tokens_; }

  WordId word(std::size_t d, std::size_t n) const { return words_[d][n]; }
  std::span<const WordId> words(std::size_t d) const { return words_[d]; }
  TableId table_of(std::size_t d, std::size_t n) const { return token_table_[d][n]; }
  TopicId topic_of(std::size_t d, std::size_t n) const { return token_topic_[d][n]; }
  std::span<const TopicId> topics(std::size_t d) const { return token_topic_[d]; }
  std::span<const TableId> token_tables(std::size_t d) const { return token_table_[d]; }
  std::span<const Table> tables(std::size_t d) const { return tables_[d]; }
  std::size_t num_tables(std::size_t d) const { return tables_[d].size(); }

  /// Number of dish slots, including pinned dishes that currently have no table.
  std::size_t num_dishes() const noexcept { return tables_per_dish_.size(); }
  /// Number of dishes serving at least one table (the inferred category count).
  std::size_t active_dishes() const noexcept;
  std::size_t num_pinned() const noexcept { return num_pinned_; }
  bool is_pinned(DishId k) const noexcept { return k < num_pinned_; }

  std::uint32_t tables_per_dish(DishId k) const { return tables_per_dish_[k]; }
  std::span<const std::uint32_t> tables_per_dish() const { return tables_per_dish_; }
  std::size_t total_tables() const noexcept { return total_tables_; }

  std::int32_t dish_topic(DishId k, TopicId l) const {
    return dish_topic_[static_cast<std::size_t>(k) * hypers_.num_topics + l];
  }
  std::span<const std::int32_t> dish_topic_row(DishId k) const {
    return {dish_topic_.data() + static_cast<std::size_t>(k) * hypers_.num_topics,
            hypers_.num_topics};
  }
  std::int64_t dish_total(DishId k) const { return dish_total_[k]; }

  std::int32_t topic_word(TopicId l, WordId w) const {
    return topic_word_[static_cast<std::size_t>(l) * vocab_size_ + w];
  }
  std::int64_t topic_total(TopicId l) const { return topic_total_[l]; }

  /// Clamp dish of document d, or kNone when unlabeled.
  DishId clamp(std::size_t d) const { return clamp_[d]; }
  bool is_clamped(std::size_t d) const { return clamp_[d] != kNone; }

  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  void set_gamma(double gamma) noexcept { gamma_ = gamma; }
  void set_alpha(double alpha) noexcept { alpha_ = alpha; }

  /// Unnormalized log p(t, k, y, w, gamma, alpha) with all Dirichlet-
  /// distributed parameters integrated out.
  double log_joint() const;

  /// Test hook: mutable access to a dish-topic cell, used to exercise audit.
  std::int32_t& dish_topic_cell_for_testing(DishId k, TopicId l) {
    return dish_topic_[static_cast<std::size_t>(k) * hypers_.num_topics + l];
  }

  friend bool operator==(const CrfState&, const CrfState&) = default;

 private:
  DishId add_dish();
  void remove_dish(DishId k);
  void swap_dishes(DishId a, DishId b);
  void swap_tables(std::size_t d, TableId a, TableId b);
  void add_topic_counts(DishId k, TopicId l, WordId w, std::int32_t delta);

  HyperParams hypers_;
  double zeta_sum_ = 0.0;
  double beta_sum_ = 0.0;
  std::size_t vocab_size_ = 0;
  std::size_t num_tokens_ = 0;
  std::size_t num_pinned_ = 0;

  std::vector<std::vector<WordId>> words_;
  std::vector<std::vector<TableId>> token_table_;
  std::vector<std::vector<TopicId>> token_topic_;
  std::vector<std::vector<Table>> tables_;
  std::vector<DishId> clamp_;

  std::vector<std::uint32_t> tables_per_dish_;
  std::size_t total_tables_ = 0;
  std::vector<std::int32_t> dish_topic_;  // K x L, row-major
  std::vector<std::int64_t> dish_total_;
  std::vector<std::int32_t> topic_word_;  // L x P, row-major
  std::vector<std::int64_t> topic_total_;

  double gamma_ = 1.0;
  double alpha_ = 1.0;
};

struct AuditReport {
  bool ok = true;
  std::vector<std::string> problems;

  explicit operator bool() const noexcept { return ok; }
  std::string summary() const;
};

/// Recomputes every count from the assignments and checks all structural
/// invariants, including that the state's words match `corpus` when given.
AuditReport audit(const CrfState& state, const Corpus* corpus = nullptr);
inline AuditReport audit(const CrfState& state, const Corpus& corpus) {
  return audit(state, &corpus);
}

}  // namespace lbpl
