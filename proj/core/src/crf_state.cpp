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

#include "lbpl/crf_state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "special.hpp"

namespace lbpl {

using detail::log_gamma;

HyperParams HyperParams::defaults(std::size_t vocab_size, std::size_t num_topics,
                                  double zeta, double beta) {
  HyperParams h;
  h.num_topics = num_topics;
  h.zeta.assign(num_topics, zeta);
  h.beta.assign(vocab_size, beta);
  return h;
}

void HyperParams::validate(std::size_t vocab_size) const {
  auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (num_topics < 2) throw std::invalid_argument("number of topics must be >= 2");
  if (zeta.size() != num_topics) {
    throw std::invalid_argument("zeta must have one entry per topic");
  }
  if (beta.size() != vocab_size) {
    throw std::invalid_argument("beta must have one entry per vocabulary word");
  }
  if (!std::all_of(zeta.begin(), zeta.end(), positive)) {
    throw std::invalid_argument("zeta entries must be positive");
  }
  if (!std::all_of(beta.begin(), beta.end(), positive)) {
    throw std::invalid_argument("beta entries must be positive");
  }
  if (!positive(a_gamma) || !positive(b_gamma) || !positive(a_alpha) ||
      !positive(b_alpha)) {
    throw std::invalid_argument("Gamma prior parameters must be positive");
  }
}

double HyperParams::zeta_sum() const {
  return std::accumulate(zeta.begin(), zeta.end(), 0.0);
}

double HyperParams::beta_sum() const {
  return std::accumulate(beta.begin(), beta.end(), 0.0);
}

CrfState::CrfState(const Corpus& corpus, HyperParams hypers, double gamma,
                   double alpha)
    : hypers_(std::move(hypers)),
      vocab_size_(corpus.vocab_size()),
      num_tokens_(corpus.num_tokens()),
      num_pinned_(corpus.num_known()),
      gamma_(gamma),
      alpha_(alpha) {
  hypers_.validate(vocab_size_);
  zeta_sum_ = hypers_.zeta_sum();
  beta_sum_ = hypers_.beta_sum();
  const std::size_t num_docs = corpus.num_documents();
  words_.resize(num_docs);
  token_table_.resize(num_docs);
  token_topic_.resize(num_docs);
  tables_.resize(num_docs);
  clamp_.assign(num_docs, kNone);
  for (std::size_t d = 0; d < num_docs; ++d) {
    const Document& doc = corpus.document(d);
    words_[d] = doc.tokens;
    token_table_[d].assign(doc.size(), kNone);
    token_topic_[d].assign(doc.size(), kNone);
    if (doc.label) clamp_[d] = static_cast<DishId>(*doc.label);
  }
  topic_word_.assign(hypers_.num_topics * vocab_size_, 0);
  topic_total_.assign(hypers_.num_topics, 0);
  for (std::size_t k = 0; k < num_pinned_; ++k) add_dish();
}

CrfState CrfState::from_assignments(
    const Corpus& corpus, HyperParams hypers, double gamma, double alpha,
    const std::vector<std::vector<TableId>>& token_tables,
    const std::vector<std::vector<DishId>>& table_dishes,
    const std::vector<std::vector<TopicId>>& token_topics) {
  CrfState state(corpus, std::move(hypers), gamma, alpha);
  const std::size_t num_docs = corpus.num_documents();
  if (token_tables.size() != num_docs || table_dishes.size() != num_docs ||
      token_topics.size() != num_docs) {
    throw std::invalid_argument("assignment arrays must cover every document");
  }
  DishId max_dish = 0;
  bool any_table = false;
  for (const auto& dishes : table_dishes) {
    for (DishId k : dishes) {
      if (k == kNone || k == kNew) throw std::invalid_argument("table without dish");
      max_dish = std::max(max_dish, k);
      any_table = true;
    }
  }
  if (any_table) {
    while (state.num_dishes() <= max_dish) state.add_dish();
  }
  for (std::size_t d = 0; d < num_docs; ++d) {
    if (token_tables[d].size() != state.doc_size(d) ||
        token_topics[d].size() != state.doc_size(d)) {
      throw std::invalid_argument("assignment arrays must match document lengths");
    }
    for (DishId k : table_dishes[d]) {
      if (state.is_clamped(d) && k != state.clamp_[d]) {
        throw std::invalid_argument("clamped document has a table with another dish");
      }
      state.tables_[d].push_back({k, 0});
      ++state.tables_per_dish_[k];
      ++state.total_tables_;
    }
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      const TableId t = token_tables[d][n];
      const TopicId l = token_topics[d][n];
      if (t >= state.tables_[d].size()) {
        throw std::invalid_argument("token refers to a missing table");
      }
      if (l >= state.num_topics()) throw std::invalid_argument("topic out of range");
      Table& table = state.tables_[d][t];
      ++table.occupancy;
      state.token_table_[d][n] = t;
      state.token_topic_[d][n] = l;
      state.add_topic_counts(table.dish, l, state.words_[d][n], +1);
    }
    for (const Table& table : state.tables_[d]) {
      if (table.occupancy == 0) throw std::invalid_argument("empty table");
    }
  }
  for (DishId k = static_cast<DishId>(state.num_pinned_); k < state.num_dishes(); ++k) {
    if (state.tables_per_dish_[k] == 0) {
      throw std::invalid_argument("dish ids must be dense");
    }
  }
  return state;
}

DishId CrfState::add_dish() {
  const auto k = static_cast<DishId>(tables_per_dish_.size());
  tables_per_dish_.push_back(0);
  dish_total_.push_back(0);
  dish_topic_.resize(dish_topic_.size() + hypers_.num_topics, 0);
  return k;
}

void CrfState::remove_dish(DishId k) {
  const auto last = static_cast<DishId>(tables_per_dish_.size() - 1);
  if (k != last) swap_dishes(k, last);
  tables_per_dish_.pop_back();
  dish_total_.pop_back();
  dish_topic_.resize(dish_topic_.size() - hypers_.num_topics);
}

void CrfState::swap_dishes(DishId a, DishId b) {
  if (a == b) return;
  const std::size_t L = hypers_.num_topics;
  std::swap(tables_per_dish_[a], tables_per_dish_[b]);
  std::swap(dish_total_[a], dish_total_[b]);
  std::swap_ranges(dish_topic_.begin() + a * L, dish_topic_.begin() + (a + 1) * L,
                   dish_topic_.begin() + b * L);
  for (auto& doc_tables : tables_) {
    for (Table& table : doc_tables) {
      if (table.dish == a) {
        table.dish = b;
      } else if (table.dish == b) {
        table.dish = a;
      }
    }
  }
  for (DishId& c : clamp_) {
    if (c == a) {
      c = b;
    } else if (c == b) {
      c = a;
    }
  }
}

void CrfState::swap_tables(std::size_t d, TableId a, TableId b) {
  if (a == b) return;
  std::swap(tables_[d][a], tables_[d][b]);
  for (TableId& t : token_table_[d]) {
    if (t == a) {
      t = b;
    } else if (t == b) {
      t = a;
    }
  }
}

void CrfState::add_topic_counts(DishId k, TopicId l, WordId w, std::int32_t delta) {
  dish_topic_[static_cast<std::size_t>(k) * hypers_.num_topics + l] += delta;
  dish_total_[k] += delta;
  topic_word_[static_cast<std::size_t>(l) * vocab_size_ + w] += delta;
  topic_total_[l] += delta;
}

TokenDetach CrfState::detach_token(std::size_t d, std::size_t n) {
  const TableId t = token_table_[d][n];
  if (t == kNone) throw std::logic_error("detach_token: token is not attached");
  const DishId k = tables_[d][t].dish;
  const TopicId l = token_topic_[d][n];
  add_topic_counts(k, l, words_[d][n], -1);
  token_table_[d][n] = kNone;

  TokenDetach record{t, k, l, false, false};
  if (--tables_[d][t].occupancy == 0) {
    record.table_removed = true;
    const auto last = static_cast<TableId>(tables_[d].size() - 1);
    swap_tables(d, t, last);
    tables_[d].pop_back();
    --total_tables_;
    if (--tables_per_dish_[k] == 0 && !is_pinned(k)) {
      record.dish_removed = true;
      remove_dish(k);
    }
  }
  return record;
}

TableId CrfState::attach_token(std::size_t d, std::size_t n, TableId table,
                               DishId dish, TopicId topic) {
  if (token_table_[d][n] != kNone) {
    throw std::logic_error("attach_token: token is already attached");
  }
  if (topic >= hypers_.num_topics) throw std::logic_error("attach_token: bad topic");
  if (table == kNew) {
    if (is_clamped(d) && dish != clamp_[d]) {
      throw std::logic_error("attach_token: clamped document given a foreign dish");
    }
    if (dish == kNew) {
      dish = add_dish();
    } else if (dish >= num_dishes()) {
      throw std::logic_error("attach_token: bad dish");
    }
    table = static_cast<TableId>(tables_[d].size());
    tables_[d].push_back({dish, 0});
    ++tables_per_dish_[dish];
    ++total_tables_;
  } else if (table >= tables_[d].size()) {
    throw std::logic_error("attach_token: bad table");
  }
  Table& target = tables_[d][table];
  ++target.occupancy;
  token_table_[d][n] = table;
  token_topic_[d][n] = topic;
  add_topic_counts(target.dish, topic, words_[d][n], +1);
  return table;
}

void CrfState::undo_detach(std::size_t d, std::size_t n, const TokenDetach& record) {
  if (!record.table_removed) {
    attach_token(d, n, record.table, kNone, record.topic);
    return;
  }
  const TableId t =
      attach_token(d, n, kNew, record.dish_removed ? kNew : record.dish, record.topic);
  if (record.dish_removed) {
    swap_dishes(record.dish, static_cast<DishId>(num_dishes() - 1));
  }
  swap_tables(d, record.table, t);
}

void CrfState::unassign_topic(std::size_t d, std::size_t n) {
  const TableId t = token_table_[d][n];
  if (t == kNone) throw std::logic_error("unassign_topic: token is not attached");
  add_topic_counts(tables_[d][t].dish, token_topic_[d][n], words_[d][n], -1);
}

void CrfState::assign_topic(std::size_t d, std::size_t n, TopicId topic) {
  const TableId t = token_table_[d][n];
  if (t == kNone) throw std::logic_error("assign_topic: token is not attached");
  token_topic_[d][n] = topic;
  add_topic_counts(tables_[d][t].dish, topic, words_[d][n], +1);
}

std::vector<TopicCounts> CrfState::table_topic_counts(std::size_t d) const {
  std::vector<std::vector<TopicId>> members(tables_[d].size());
  for (std::size_t n = 0; n < words_[d].size(); ++n) {
    members[token_table_[d][n]].push_back(token_topic_[d][n]);
  }
  std::vector<TopicCounts> counts(members.size());
  for (std::size_t t = 0; t < members.size(); ++t) {
    auto& topics = members[t];
    std::sort(topics.begin(), topics.end());
    for (TopicId l : topics) {
      if (!counts[t].empty() && counts[t].back().first == l) {
        ++counts[t].back().second;
      } else {
        counts[t].emplace_back(l, 1);
      }
    }
  }
  return counts;
}

TableDetach CrfState::detach_table(std::size_t d, TableId t, const TopicCounts& counts) {
  Table& table = tables_[d][t];
  const DishId k = table.dish;
  if (k == kNone) throw std::logic_error("detach_table: table has no dish");
  const std::size_t L = hypers_.num_topics;
  for (const auto& [l, c] : counts) {
    dish_topic_[k * L + l] -= static_cast<std::int32_t>(c);
    dish_total_[k] -= c;
  }
  table.dish = kNone;
  --total_tables_;
  TableDetach record{k, false};
  if (--tables_per_dish_[k] == 0 && !is_pinned(k)) {
    record.dish_removed = true;
    remove_dish(k);
  }
  return record;
}

DishId CrfState::attach_table(std::size_t d, TableId t, DishId dish,
                              const TopicCounts& counts) {
  Table& table = tables_[d][t];
  if (table.dish != kNone) throw std::logic_error("attach_table: table already has a dish");
  if (is_clamped(d) && dish != clamp_[d]) {
    throw std::logic_error("attach_table: clamped document given a foreign dish");
  }
  if (dish == kNew) {
    dish = add_dish();
  } else if (dish >= num_dishes()) {
    throw std::logic_error("attach_table: bad dish");
  }
  const std::size_t L = hypers_.num_topics;
  for (const auto& [l, c] : counts) {
    dish_topic_[dish * L + l] += static_cast<std::int32_t>(c);
    dish_total_[dish] += c;
  }
  tables_[d][t].dish = dish;
  ++tables_per_dish_[dish];
  ++total_tables_;
  return dish;
}

void CrfState::replace_word(std::size_t d, std::size_t n, WordId word) {
  const TopicId l = token_topic_[d][n];
  topic_word_[static_cast<std::size_t>(l) * vocab_size_ + words_[d][n]] -= 1;
  topic_word_[static_cast<std::size_t>(l) * vocab_size_ + word] += 1;
  words_[d][n] = word;
}

std::size_t CrfState::active_dishes() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(tables_per_dish_.begin(), tables_per_dish_.end(),
                    [](std::uint32_t m) { return m > 0; }));
}

double CrfState::log_joint() const {
  using detail::log_gamma_density;
  double lj = log_gamma_density(gamma_, hypers_.a_gamma, hypers_.b_gamma) +
              log_gamma_density(alpha_, hypers_.a_alpha, hypers_.b_alpha);

  const double log_alpha = std::log(alpha_);
  const double lg_alpha = log_gamma(alpha_);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    const std::size_t n_d = words_[d].size();
    if (n_d == 0) continue;
    lj += static_cast<double>(tables_[d].size()) * log_alpha + lg_alpha -
          log_gamma(alpha_ + static_cast<double>(n_d));
    for (const Table& table : tables_[d]) lj += log_gamma(table.occupancy);
  }

  std::size_t active = 0;
  for (std::uint32_t m : tables_per_dish_) {
    if (m == 0) continue;
    ++active;
    lj += log_gamma(m);
  }
  lj += static_cast<double>(active) * std::log(gamma_) + log_gamma(gamma_) -
        log_gamma(gamma_ + static_cast<double>(total_tables_));

  const std::size_t L = hypers_.num_topics;
  const double zeta_sum = zeta_sum_;
  for (std::size_t k = 0; k < num_dishes(); ++k) {
    if (tables_per_dish_[k] == 0) continue;
    lj += log_gamma(zeta_sum) - log_gamma(zeta_sum + static_cast<double>(dish_total_[k]));
    for (std::size_t l = 0; l < L; ++l) {
      const std::int32_t c = dish_topic_[k * L + l];
      if (c > 0) lj += log_gamma(hypers_.zeta[l] + c) - log_gamma(hypers_.zeta[l]);
    }
  }

  const double beta_sum = beta_sum_;
  for (std::size_t l = 0; l < L; ++l) {
    lj += log_gamma(beta_sum) - log_gamma(beta_sum + static_cast<double>(topic_total_[l]));
    const std::int32_t* row = topic_word_.data() + l * vocab_size_;
    for (std::size_t w = 0; w < vocab_size_; ++w) {
      if (row[w] > 0) lj += log_gamma(hypers_.beta[w] + row[w]) - log_gamma(hypers_.beta[w]);
    }
  }
  return lj;
}

std::string AuditReport::summary() const {
  if (ok) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (i > 0) out << "; ";
    out << problems[i];
  }
  return out.str();
}

AuditReport audit(const CrfState& state, const Corpus* corpus) {
  AuditReport report;
  constexpr std::size_t kMaxProblems = 32;
  auto fail = [&report](const std::string& problem) {
    report.ok = false;
    if (report.problems.size() < kMaxProblems) report.problems.push_back(problem);
  };
  auto where = [](const char* what, std::size_t a, std::size_t b) {
    std::ostringstream out;
    out << what << '[' << a << "][" << b << ']';
    return out.str();
  };

  const std::size_t L = state.num_topics();
  const std::size_t P = state.vocab_size();
  const std::size_t K = state.num_dishes();

  if (!(state.gamma() > 0.0) || !std::isfinite(state.gamma())) fail("gamma not positive");
  if (!(state.alpha() > 0.0) || !std::isfinite(state.alpha())) fail("alpha not positive");

  if (corpus) {
    if (corpus->num_documents() != state.num_documents()) {
      fail("document count differs from corpus");
      return report;
    }
    for (std::size_t d = 0; d < state.num_documents(); ++d) {
      const auto& doc = corpus->document(d);
      if (!std::equal(doc.tokens.begin(), doc.tokens.end(), state.words(d).begin(),
                      state.words(d).end())) {
        fail("words of document " + std::to_string(d) + " differ from corpus");
      }
      const DishId expected = doc.label ? static_cast<DishId>(*doc.label) : kNone;
      if (state.clamp(d) != expected) {
        fail("clamp of document " + std::to_string(d) + " does not match its label");
      }
    }
  }

  std::vector<std::uint32_t> tables_per_dish(K, 0);
  std::vector<std::int64_t> dish_topic(K * L, 0);
  std::vector<std::int64_t> topic_word(L * P, 0);
  std::size_t total_tables = 0;
  std::size_t total_tokens = 0;

  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    const auto tables = state.tables(d);
    std::vector<std::uint32_t> occupancy(tables.size(), 0);
    for (std::size_t n = 0; n < state.doc_size(d); ++n) {
      const TableId t = state.table_of(d, n);
      const TopicId l = state.topic_of(d, n);
      const WordId w = state.word(d, n);
      if (t >= tables.size()) {
        fail(where("token_table", d, n) + " is unattached or out of range");
        continue;
      }
      if (l >= L) {
        fail(where("token_topic", d, n) + " out of range");
        continue;
      }
      if (w >= P) {
        fail(where("word", d, n) + " out of range");
        continue;
      }
      ++occupancy[t];
      ++total_tokens;
      const DishId k = tables[t].dish;
      if (k < K) ++dish_topic[k * L + l];
      ++topic_word[l * P + w];
    }
    for (std::size_t t = 0; t < tables.size(); ++t) {
      if (tables[t].occupancy != occupancy[t]) {
        fail(where("occupancy", d, t) + " is " + std::to_string(tables[t].occupancy) +
             ", recomputed " + std::to_string(occupancy[t]));
      }
      if (occupancy[t] == 0) fail(where("table", d, t) + " is empty");
      const DishId k = tables[t].dish;
      if (k >= K) {
        fail(where("table", d, t) + " has no valid dish");
        continue;
      }
      ++tables_per_dish[k];
      ++total_tables;
      if (state.is_clamped(d) && k != state.clamp(d)) {
        fail(where("table", d, t) + " violates the document clamp");
      }
    }
  }

  if (total_tokens != state.num_tokens()) fail("attached token count differs from total");
  if (total_tables != state.total_tables()) {
    fail("total table count " + std::to_string(state.total_tables()) + ", recomputed " +
         std::to_string(total_tables));
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (tables_per_dish[k] != state.tables_per_dish(static_cast<DishId>(k))) {
      fail("tables_per_dish[" + std::to_string(k) + "] differs from recomputed value");
    }
    if (tables_per_dish[k] == 0 && !state.is_pinned(static_cast<DishId>(k))) {
      fail("dish " + std::to_string(k) + " has no tables");
    }
    std::int64_t row_total = 0;
    for (std::size_t l = 0; l < L; ++l) {
      const auto stored = state.dish_topic(static_cast<DishId>(k), static_cast<TopicId>(l));
      if (stored < 0) fail(where("dish_topic", k, l) + " is negative");
      if (stored != dish_topic[k * L + l]) {
        fail(where("dish_topic", k, l) + " is " + std::to_string(stored) + ", recomputed " +
             std::to_string(dish_topic[k * L + l]));
      }
      row_total += dish_topic[k * L + l];
    }
    if (row_total != state.dish_total(static_cast<DishId>(k))) {
      fail("dish_total[" + std::to_string(k) + "] differs from recomputed value");
    }
  }
  for (std::size_t l = 0; l < L; ++l) {
    std::int64_t row_total = 0;
    for (std::size_t w = 0; w < P; ++w) {
      const auto stored = state.topic_word(static_cast<TopicId>(l), static_cast<WordId>(w));
      if (stored < 0) fail(where("topic_word", l, w) + " is negative");
      if (stored != topic_word[l * P + w]) {
        fail(where("topic_word", l, w) + " is " + std::to_string(stored) + ", recomputed " +
             std::to_string(topic_word[l * P + w]));
      }
      row_total += topic_word[l * P + w];
    }
    if (row_total != state.topic_total(static_cast<TopicId>(l))) {
      fail("topic_total[" + std::to_string(l) + "] differs from recomputed value");
    }
  }
  return report;
}

}  // namespace lbpl
