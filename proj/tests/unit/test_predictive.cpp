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

#include <doctest.h>

#include <cmath>
#include <random>

#include "lbpl/predictive.hpp"
#include "lbpl/sampler.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace lbpl;

namespace {

// One document, one table on dish 0, tokens with the given topics.
CrfState single_table_state(const std::vector<TopicId>& topics, std::size_t L = 2) {
  std::vector<WordId> words(topics.size(), 0);
  const Corpus c = make_corpus(Vocabulary(1), {words}, {});
  return CrfState::from_assignments(c, HyperParams::defaults(1, L, 1.0, 0.01), 1.0, 1.0,
                                    {std::vector<TableId>(topics.size(), 0)}, {{0}}, {topics});
}

// Dish-by-topic and topic-by-word counts recomputed from the assignments,
// skipping token (skip_d, skip_n).
struct BruteCounts {
  std::vector<std::vector<int>> dish_topic;
  std::vector<std::vector<int>> topic_word;
};

BruteCounts brute_counts(const CrfState& s, std::size_t skip_d, std::size_t skip_n) {
  BruteCounts out;
  out.dish_topic.assign(s.num_dishes(), std::vector<int>(s.num_topics(), 0));
  out.topic_word.assign(s.num_topics(), std::vector<int>(s.vocab_size(), 0));
  for (std::size_t d = 0; d < s.num_documents(); ++d) {
    for (std::size_t n = 0; n < s.doc_size(d); ++n) {
      if (d == skip_d && n == skip_n) continue;
      const DishId k = s.tables(d)[s.table_of(d, n)].dish;
      ++out.dish_topic[k][s.topic_of(d, n)];
      ++out.topic_word[s.topic_of(d, n)][s.word(d, n)];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("category predictive examples") {
  const CrfState s = single_table_state({0, 0, 0, 1});
  CHECK(category_predictive(s, 0, 0) == doctest::Approx(4.0 / 6.0).epsilon(1e-14));
  CHECK(category_predictive(s, 1, 0) == doctest::Approx(2.0 / 6.0).epsilon(1e-14));
  CHECK(category_predictive(s, 0, kNew) == doctest::Approx(0.5).epsilon(1e-14));

  const CrfState even = single_table_state({0, 1, 1, 0});
  CHECK(category_predictive(even, 0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(category_predictive(even, 1, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("category predictive of a dish with no topic counts equals the new-dish value") {
  // Dish 0 is pinned and holds no tokens.
  const Corpus c = make_corpus(Vocabulary(1), {{0}, {0}}, {{1, "x"}});
  HyperParams h = HyperParams::defaults(1, 3, 1.0, 0.01);
  h.zeta = {0.5, 1.5, 2.0};
  CrfState s(c, h, 1.0, 1.0);
  for (TopicId l = 0; l < 3; ++l) {
    CHECK(category_predictive(s, l, 0) == doctest::Approx(category_predictive(s, l, kNew)));
    CHECK(category_predictive(s, l, kNew) == doctest::Approx(h.zeta[l] / 4.0));
  }
}

TEST_CASE("block predictive examples") {
  const CrfState s = single_table_state({0});
  CHECK(table_block_log_predictive(s, {{0, 2}}, kNew) ==
        doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-14));
  CHECK(table_block_log_predictive(s, {{0, 1}, {1, 1}}, kNew) ==
        doctest::Approx(std::log(1.0 / 6.0)).epsilon(1e-14));
  CHECK(table_block_log_predictive(s, {}, kNew) == 0.0);
  CHECK(table_block_log_predictive(s, {}, 0) == 0.0);
}

TEST_CASE("predictives match Dirichlet-integral ratios on random configurations") {
  std::mt19937_64 gen(101);
  std::uniform_real_distribution<double> conc(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Corpus c = lbpl::testing::random_corpus(gen, {.max_docs = 6, .max_vocab = 5,
                                                        .max_length = 12});
    const std::size_t L = 2 + gen() % 5;
    HyperParams h = HyperParams::defaults(c.vocab_size(), L);
    for (double& z : h.zeta) z = conc(gen);
    for (double& b : h.beta) b = conc(gen);
    const CrfState s = init_state(c, h, gen());
    if (s.num_dishes() == 0) continue;
    const auto brute = brute_counts(s, kNone, kNone);

    const auto k = static_cast<DishId>(gen() % s.num_dishes());
    const auto l = static_cast<TopicId>(gen() % L);
    CHECK(category_predictive(s, l, k) ==
          doctest::Approx(lbpl::oracle::category_predictive(h.zeta, brute.dish_topic[k], l))
              .epsilon(1e-10));

    std::vector<int> block(L, 0);
    TopicCounts counts;
    for (TopicId t = 0; t < L; ++t) {
      const int c_t = static_cast<int>(gen() % 4);
      block[t] = c_t;
      if (c_t > 0) counts.emplace_back(t, c_t);
    }
    CHECK(table_block_log_predictive(s, counts, k) ==
          doctest::Approx(lbpl::oracle::block_log_predictive(h.zeta, brute.dish_topic[k], block))
              .epsilon(1e-10));
    const std::vector<int> zeros(L, 0);
    CHECK(table_block_log_predictive(s, counts, kNew) ==
          doctest::Approx(lbpl::oracle::block_log_predictive(h.zeta, zeros, block))
              .epsilon(1e-10));

    // A single-token block is the log of the single-token predictive.
    CHECK(std::abs(table_block_log_predictive(s, {{l, 1}}, k) -
                   std::log(category_predictive(s, l, k))) < 1e-12);
    CHECK(std::abs(table_block_log_predictive(s, {{l, 1}}, kNew) -
                   std::log(category_predictive(s, l, kNew))) < 1e-12);
  }
}

TEST_CASE("topic weights example") {
  // doc 0: target w0 plus w0 x3 on topic 0 and w1 on topic 1, all on dish 0.
  // doc 1 on dish 1: w0 x2 and w2 x5 on topic 0, w1 x3 on topic 1.
  const Corpus c = make_corpus(
      Vocabulary(3), {{0, 0, 0, 0, 1}, {0, 0, 2, 2, 2, 2, 2, 1, 1, 1}}, {});
  const HyperParams h = HyperParams::defaults(3, 2, 1.0, 0.01);
  CrfState s = CrfState::from_assignments(
      c, h, 1.0, 1.0, {{0, 0, 0, 0, 0}, std::vector<TableId>(10, 0)}, {{0}, {1}},
      {{0, 0, 0, 0, 1}, {0, 0, 0, 0, 0, 0, 0, 1, 1, 1}});
  s.unassign_topic(0, 0);
  std::vector<double> w(2);
  topic_weights(s, 0, 0, w);
  CHECK(w[0] == doctest::Approx((4.0 / 6.0) * (5.01 / 10.03)).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx((2.0 / 6.0) * (0.01 / 4.03)).epsilon(1e-14));
}

TEST_CASE("topic weights are uniform under symmetric priors with no counts") {
  const Corpus c = make_corpus(Vocabulary(4), {{2}}, {});
  CrfState s = init_state(c, HyperParams::defaults(4, 5), 3);
  s.unassign_topic(0, 0);
  std::vector<double> w(5);
  topic_weights(s, 0, 0, w);
  for (double x : w) CHECK(x == doctest::Approx(w[0]).epsilon(1e-15));
  CHECK(w[0] == doctest::Approx(0.2 * 0.25).epsilon(1e-14));
}

TEST_CASE("topic weights concentrate on a topic that owns the word") {
  // Topic 0 has produced word 0 many times, topic 1 has produced only word 1.
  std::vector<WordId> words(401, 0);
  for (std::size_t i = 201; i < 401; ++i) words[i] = 1;
  std::vector<TopicId> topics(401, 0);
  for (std::size_t i = 201; i < 401; ++i) topics[i] = 1;
  const Corpus c = make_corpus(Vocabulary(2), {words}, {});
  CrfState s = CrfState::from_assignments(c, HyperParams::defaults(2, 2, 1.0, 0.01), 1.0, 1.0,
                                          {std::vector<TableId>(401, 0)}, {{0}}, {topics});
  s.unassign_topic(0, 0);
  std::vector<double> w(2);
  topic_weights(s, 0, 0, w);
  CHECK(w[0] / (w[0] + w[1]) > 0.9999);
}

TEST_CASE("topic weights match the definition on random configurations") {
  std::mt19937_64 gen(202);
  std::uniform_real_distribution<double> conc(0.05, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Corpus c = lbpl::testing::random_corpus(gen);
    if (c.num_tokens() == 0) continue;
    const std::size_t L = 2 + gen() % 5;
    HyperParams h = HyperParams::defaults(c.vocab_size(), L);
    for (double& z : h.zeta) z = conc(gen);
    for (double& b : h.beta) b = conc(gen);
    CrfState s = init_state(c, h, gen());
    std::size_t d = 0;
    do d = gen() % c.num_documents();
    while (c.document(d).size() == 0);
    const std::size_t n = gen() % c.document(d).size();
    const auto brute = brute_counts(s, d, n);
    s.unassign_topic(d, n);
    std::vector<double> w(L);
    topic_weights(s, d, n, w);

    const DishId k = s.tables(d)[s.table_of(d, n)].dish;
    const WordId word = s.word(d, n);
    for (TopicId l = 0; l < L; ++l) {
      std::vector<int> with_word(c.vocab_size(), 0);
      with_word[word] = 1;
      const double word_factor = std::exp(
          lbpl::oracle::block_log_predictive(h.beta, brute.topic_word[l], with_word));
      const double expected =
          lbpl::oracle::category_predictive(h.zeta, brute.dish_topic[k], l) * word_factor;
      CHECK(w[l] == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}
