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
#include <map>
#include <random>
#include <set>

#include "lbpl/generative.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

using namespace lbpl;

namespace {

GenSpec small_spec(std::size_t D, std::size_t n, std::size_t L = 2, std::size_t P = 3) {
  GenSpec spec = GenSpec::uniform(D, n, HyperParams::defaults(P, L, 1.0, 0.5));
  spec.fixed_gamma = 1.0;
  spec.fixed_alpha = 1.0;
  return spec;
}

std::size_t count_tables(const LatentDraw& latent) {
  std::size_t m = 0;
  for (const auto& doc : latent.table_dishes) m += doc.size();
  return m;
}

std::size_t count_dishes(const LatentDraw& latent) {
  std::set<DishId> used;
  for (const auto& doc : latent.table_dishes) used.insert(doc.begin(), doc.end());
  return used.size();
}

}  // namespace

TEST_CASE("generator settings validation") {
  GenSpec spec = small_spec(3, 4);
  CHECK_NOTHROW(spec.validate());
  GenSpec bad = spec;
  bad.doc_lengths.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.fixed_alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.planted = {0, 1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.labeled = {true, false, false};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.planted_mixtures = {{1.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("forward draws are well formed") {
  const GenSpec spec = small_spec(5, 7, 3, 4);
  std::vector<std::size_t> ks;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const SyntheticCorpus draw = forward_sample(spec, rng);
    CHECK(draw.corpus.num_documents() == 5);
    CHECK(draw.corpus.num_tokens() == 35);
    CHECK(count_dishes(draw.latent) >= 1);
    CHECK(count_tables(draw.latent) >= 5);
    CHECK(draw.latent.topics.size() == 3);
    CHECK(draw.latent.gamma == 1.0);
    const CrfState state = latent_state(draw, spec.hypers);
    CHECK(audit(state, draw.corpus));
    CHECK(state.active_dishes() == count_dishes(draw.latent));
    ks.push_back(state.total_tables());
  }
  CHECK(std::set<std::size_t>(ks.begin(), ks.end()).size() > 1);
}

TEST_CASE("vanishing alpha gives one table per document") {
  GenSpec spec = small_spec(6, 15);
  spec.fixed_alpha = 1e-12;
  Rng rng(3);
  const SyntheticCorpus draw = forward_sample(spec, rng);
  for (const auto& doc : draw.latent.table_dishes) CHECK(doc.size() == 1);
}

TEST_CASE("concentrations drawn from their priors when not fixed") {
  GenSpec spec = small_spec(2, 3);
  spec.fixed_gamma.reset();
  spec.fixed_alpha.reset();
  spec.hypers.a_alpha = 2.0;
  spec.hypers.b_alpha = 3.0;
  std::vector<double> alphas;
  for (std::uint64_t seed = 0; seed < 20000; ++seed) {
    Rng rng(seed);
    alphas.push_back(forward_sample(spec, rng).latent.alpha);
  }
  CHECK(std::abs(lbpl::oracle::mean(alphas) - 6.0) < 3 * lbpl::oracle::standard_error(alphas));
}

TEST_CASE("franchise seating matches an independent simulation") {
  const GenSpec spec = small_spec(50, 20);
  const std::size_t draws = 10000;
  std::vector<double> k_model, m_model, k_oracle, m_oracle;
  std::mt19937_64 gen(2024);
  for (std::size_t i = 0; i < draws; ++i) {
    Rng rng(77, i);
    const SyntheticCorpus draw = forward_sample(spec, rng);
    k_model.push_back(static_cast<double>(count_dishes(draw.latent)));
    m_model.push_back(static_cast<double>(count_tables(draw.latent)));
    const auto [k, m] = lbpl::oracle::simulate_franchise(50, 20, 1.0, 1.0, gen);
    k_oracle.push_back(static_cast<double>(k));
    m_oracle.push_back(static_cast<double>(m));
  }
  const double k_se = std::hypot(lbpl::oracle::standard_error(k_model),
                                 lbpl::oracle::standard_error(k_oracle));
  CHECK(std::abs(lbpl::oracle::mean(k_model) - lbpl::oracle::mean(k_oracle)) < 3 * k_se);
  const double m_se = std::hypot(lbpl::oracle::standard_error(m_model),
                                 lbpl::oracle::standard_error(m_oracle));
  CHECK(std::abs(lbpl::oracle::mean(m_model) - lbpl::oracle::mean(m_oracle)) < 3 * m_se);

  // E[M] in closed form: each document contributes sum_i alpha / (alpha + i).
  double harmonic = 0.0;
  for (int i = 0; i < 20; ++i) harmonic += 1.0 / (1.0 + i);
  CHECK(std::abs(lbpl::oracle::mean(m_model) - 50 * harmonic) <
        3 * lbpl::oracle::standard_error(m_model));
}

TEST_CASE("document order does not change the seating distribution") {
  GenSpec a = small_spec(3, 0);
  a.doc_lengths = {4, 25, 9};
  GenSpec b = a;
  b.doc_lengths = {25, 9, 4};
  std::vector<double> ka, kb, ma, mb;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    Rng ra(5, i), rb(6, i);
    const auto da = forward_sample(a, ra);
    const auto db = forward_sample(b, rb);
    ka.push_back(static_cast<double>(count_dishes(da.latent)));
    kb.push_back(static_cast<double>(count_dishes(db.latent)));
    ma.push_back(static_cast<double>(count_tables(da.latent)));
    mb.push_back(static_cast<double>(count_tables(db.latent)));
  }
  using lbpl::oracle::mean;
  using lbpl::oracle::standard_error;
  CHECK(std::abs(mean(ka) - mean(kb)) < 3.5 * std::hypot(standard_error(ka), standard_error(kb)));
  CHECK(std::abs(mean(ma) - mean(mb)) < 3.5 * std::hypot(standard_error(ma), standard_error(mb)));
}

TEST_CASE("planted categories force dishes and define the truth") {
  GenSpec spec = small_spec(12, 10, 4, 20);
  spec.planted.resize(12);
  spec.labeled.assign(12, false);
  for (std::size_t d = 0; d < 8; ++d) spec.planted[d] = static_cast<CategoryId>(d % 2);
  spec.labeled[0] = spec.labeled[3] = true;
  spec.planted_mixtures = separated_mixtures(2, 4, 0.9);
  Rng rng(8);
  const SyntheticCorpus draw = forward_sample(spec, rng);
  for (std::size_t d = 0; d < 8; ++d) {
    for (DishId k : draw.latent.table_dishes[d]) CHECK(k == d % 2);
    CHECK(draw.truth_names[d] == "c" + std::to_string(d % 2));
  }
  CHECK(draw.corpus.known_labels() == std::vector<std::string>{"c0", "c1"});
  CHECK(draw.corpus.document(0).label == 0);
  CHECK(draw.corpus.document(3).label == 1);
  CHECK_FALSE(draw.corpus.document(1).label);
  CHECK(draw.latent.dish_mixtures[0] == spec.planted_mixtures[0]);

  // Unplanted documents take the dish generating most of their words.
  for (std::size_t d = 8; d < 12; ++d) {
    std::map<DishId, std::size_t> votes;
    for (TableId t : draw.latent.token_tables[d]) ++votes[draw.latent.table_dishes[d][t]];
    std::size_t best = 0;
    for (auto [k, v] : votes) best = std::max(best, v);
    const auto id = static_cast<DishId>(std::stoul(draw.truth_names[d].substr(1)));
    CHECK(votes[id] == best);
  }
  for (std::size_t d = 0; d < 12; ++d) {
    CHECK(draw.corpus.known_id(draw.truth_names[d]).value_or(draw.truth[d]) == draw.truth[d]);
  }
  const CrfState state = latent_state(draw, spec.hypers);
  CHECK(audit(state, draw.corpus));
  CHECK(state.clamp(0) == 0);
  CHECK(state.clamp(3) == 1);
}

TEST_CASE("synthetic corpora survive the file formats") {
  GenSpec spec = small_spec(6, 8, 3, 5);
  spec.planted.assign(6, std::nullopt);
  spec.planted[1] = 0;
  spec.labeled.assign(6, false);
  spec.labeled[1] = true;
  Rng rng(12);
  const SyntheticCorpus draw = forward_sample(spec, rng);
  lbpl::testing::TempDir dir;
  write_synthetic(draw, dir.path());
  const Corpus back = load_corpus(dir.path() / "corpus.bow", dir.path() / "labels.txt",
                                  dir.path() / "vocab.txt");
  CHECK(back == draw.corpus);
  CHECK(ground_truth_partition(back, dir.path() / "truth.txt") == draw.truth);
}

TEST_CASE("separated mixtures") {
  const auto mix = separated_mixtures(4, 8, 0.9);
  REQUIRE(mix.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    double total = 0.0, dominant = 0.0;
    for (std::size_t l = 0; l < 8; ++l) {
      total += mix[c][l];
      if (l % 4 == c) dominant += mix[c][l];
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(dominant == doctest::Approx(0.9));
  }
  CHECK_THROWS_AS(separated_mixtures(5, 4, 0.9), std::invalid_argument);
}

TEST_CASE("planted corpus options") {
  const GenSpec spec = planted_spec({});
  CHECK(spec.num_docs() == 200);
  CHECK(spec.vocab_size() == 200);
  CHECK(spec.hypers.num_topics == 8);
  CHECK(spec.num_planted_categories() == 4);
  std::vector<std::size_t> per_class(4, 0), labeled(4, 0);
  for (std::size_t d = 0; d < 200; ++d) {
    const auto c = static_cast<std::size_t>(*spec.planted[d]);
    CHECK(c == d % 4);
    ++per_class[c];
    labeled[c] += spec.labeled[d];
  }
  CHECK(per_class == std::vector<std::size_t>{50, 50, 50, 50});
  CHECK(labeled == std::vector<std::size_t>{20, 20, 0, 0});

  Rng rng(1, 0, 0);
  const SyntheticCorpus sample = forward_sample(spec, rng);
  CHECK(sample.corpus.num_known() == 2);
  CHECK(sample.corpus.labeled_documents().size() == 40);
  CHECK(sample.corpus.num_tokens() == 200 * 50);

  PlantedCorpusOptions bad;
  bad.known = 5;
  CHECK_THROWS_AS(planted_spec(bad), std::invalid_argument);
  bad = {};
  bad.label_fraction = 1.5;
  CHECK_THROWS_AS(planted_spec(bad), std::invalid_argument);
  bad = {};
  bad.dominance = 0.0;
  CHECK_THROWS_AS(planted_spec(bad), std::invalid_argument);
  bad = {};
  bad.categories = 9;
  CHECK_THROWS_AS(planted_spec(bad), std::invalid_argument);
}

TEST_CASE("dirichlet draws") {
  Rng rng(4);
  const std::vector<double> conc{0.5, 1.5, 3.0};
  std::vector<std::vector<double>> cols(3);
  for (int i = 0; i < 50000; ++i) {
    const auto x = sample_dirichlet(conc, rng);
    double total = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      cols[j].push_back(x[j]);
      total += x[j];
    }
    REQUIRE(total == doctest::Approx(1.0));
  }
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(std::abs(lbpl::oracle::mean(cols[j]) - conc[j] / 5.0) <
          4 * lbpl::oracle::standard_error(cols[j]));
  }
  const auto tiny = sample_dirichlet(std::vector<double>(50, 1e-3), rng);
  double total = 0.0;
  for (double x : tiny) {
    CHECK(std::isfinite(x));
    total += x;
  }
  CHECK(total == doctest::Approx(1.0));
}
