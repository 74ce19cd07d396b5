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

#include "lbpl/generative.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lbpl {
namespace {

std::string category_name(std::size_t dish) { return "c" + std::to_string(dish); }

}  // namespace

GenSpec GenSpec::uniform(std::size_t num_docs, std::size_t doc_length, HyperParams hypers) {
  GenSpec spec;
  spec.doc_lengths.assign(num_docs, doc_length);
  spec.hypers = std::move(hypers);
  return spec;
}

std::size_t GenSpec::num_planted_categories() const {
  std::size_t count = planted_mixtures.size();
  for (const auto& c : planted) {
    if (c) count = std::max(count, static_cast<std::size_t>(*c) + 1);
  }
  return count;
}

void GenSpec::validate() const {
  if (doc_lengths.empty()) throw std::invalid_argument("need at least one document");
  hypers.validate(hypers.beta.size());
  if (hypers.beta.empty()) throw std::invalid_argument("vocabulary must be non-empty");
  if (fixed_gamma && !(*fixed_gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (fixed_alpha && !(*fixed_alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!planted.empty() && planted.size() != doc_lengths.size()) {
    throw std::invalid_argument("planted must have one entry per document");
  }
  for (const auto& c : planted) {
    if (c && *c < 0) throw std::invalid_argument("planted categories must be >= 0");
  }
  for (const auto& mixture : planted_mixtures) {
    if (mixture.size() != hypers.num_topics) {
      throw std::invalid_argument("planted mixture must have one entry per topic");
    }
  }
  if (!labeled.empty()) {
    if (labeled.size() != doc_lengths.size()) {
      throw std::invalid_argument("labeled must have one entry per document");
    }
    for (std::size_t d = 0; d < labeled.size(); ++d) {
      if (labeled[d] && (planted.empty() || !planted[d])) {
        throw std::invalid_argument("only planted documents can be labeled");
      }
    }
  }
}

std::vector<double> sample_dirichlet(const std::vector<double>& concentration, Rng& rng) {
  // Work in log space: for small shapes, Gamma(a) = Gamma(a + 1) * U^(1/a)
  // keeps the draws representable.
  std::vector<double> logs(concentration.size());
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    const double a = concentration[i];
    logs[i] = std::log(rng.gamma(a + 1.0, 1.0)) + std::log(rng.uniform_open()) / a;
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  std::vector<double> out(concentration.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(logs[i] - top);
    total += out[i];
  }
  for (double& x : out) x /= total;
  return out;
}

std::vector<std::vector<double>> separated_mixtures(std::size_t categories,
                                                    std::size_t num_topics,
                                                    double dominance) {
  if (categories == 0 || categories > num_topics) {
    throw std::invalid_argument("need 1 <= categories <= topics");
  }
  std::vector<std::vector<double>> mixtures(categories, std::vector<double>(num_topics));
  for (std::size_t c = 0; c < categories; ++c) {
    std::size_t dominant = 0;
    for (std::size_t l = 0; l < num_topics; ++l) dominant += (l % categories == c);
    const std::size_t rest = num_topics - dominant;
    const double on = rest == 0 ? 1.0 / dominant : dominance / dominant;
    const double off = rest == 0 ? 0.0 : (1.0 - dominance) / rest;
    for (std::size_t l = 0; l < num_topics; ++l) {
      mixtures[c][l] = (l % categories == c) ? on : off;
    }
  }
  return mixtures;
}

GenSpec planted_spec(const PlantedCorpusOptions& options) {
  if (options.known > options.categories) {
    throw std::invalid_argument("known categories exceed planted categories");
  }
  if (!(options.label_fraction >= 0.0 && options.label_fraction <= 1.0)) {
    throw std::invalid_argument("label fraction must be in [0, 1]");
  }
  if (!(options.dominance > 0.0 && options.dominance <= 1.0)) {
    throw std::invalid_argument("dominance must be in (0, 1]");
  }
  GenSpec spec = GenSpec::uniform(
      options.num_docs, options.doc_length,
      HyperParams::defaults(options.vocab_size, options.num_topics, options.zeta, options.beta));
  spec.fixed_gamma = options.gamma;
  spec.fixed_alpha = options.alpha;
  spec.planted_mixtures =
      separated_mixtures(options.categories, options.num_topics, options.dominance);
  spec.planted.resize(options.num_docs);
  spec.labeled.assign(options.num_docs, false);
  const std::size_t C = options.categories;
  for (std::size_t d = 0; d < options.num_docs; ++d) {
    const std::size_t c = d % C;
    spec.planted[d] = static_cast<CategoryId>(c);
    if (c >= options.known) continue;
    const std::size_t size = (options.num_docs - c + C - 1) / C;
    const auto quota = static_cast<std::size_t>(std::llround(options.label_fraction * size));
    spec.labeled[d] = d / C < quota;
  }
  spec.validate();
  return spec;
}

SyntheticCorpus forward_sample(const GenSpec& spec, Rng& rng) {
  spec.validate();
  const HyperParams& h = spec.hypers;
  const std::size_t D = spec.num_docs();
  const std::size_t L = h.num_topics;

  LatentDraw latent;
  latent.gamma = spec.fixed_gamma ? *spec.fixed_gamma : rng.gamma(h.a_gamma, h.b_gamma);
  latent.alpha = spec.fixed_alpha ? *spec.fixed_alpha : rng.gamma(h.a_alpha, h.b_alpha);
  latent.topics.reserve(L);
  for (std::size_t l = 0; l < L; ++l) latent.topics.push_back(sample_dirichlet(h.beta, rng));

  std::vector<std::uint32_t> tables_per_dish;
  const std::size_t planted_categories = spec.num_planted_categories();
  for (std::size_t c = 0; c < planted_categories; ++c) {
    latent.dish_mixtures.push_back(c < spec.planted_mixtures.size()
                                       ? spec.planted_mixtures[c]
                                       : sample_dirichlet(h.zeta, rng));
    tables_per_dish.push_back(0);
  }

  std::vector<std::vector<WordId>> tokens(D);
  latent.token_tables.resize(D);
  latent.table_dishes.resize(D);
  latent.token_topics.resize(D);
  std::vector<double> weights;
  for (std::size_t d = 0; d < D; ++d) {
    const CategoryId forced =
        (!spec.planted.empty() && spec.planted[d]) ? *spec.planted[d] : CategoryId{-1};
    std::vector<std::uint32_t> occupancy;
    auto& dishes = latent.table_dishes[d];
    for (std::size_t n = 0; n < spec.doc_lengths[d]; ++n) {
      weights.assign(occupancy.begin(), occupancy.end());
      weights.push_back(latent.alpha);
      auto table = static_cast<TableId>(rng.categorical(weights));
      if (table == occupancy.size()) {
        DishId dish = 0;
        if (forced >= 0) {
          dish = static_cast<DishId>(forced);
        } else {
          weights.assign(tables_per_dish.begin(), tables_per_dish.end());
          weights.push_back(latent.gamma);
          dish = static_cast<DishId>(rng.categorical(weights));
          if (dish == tables_per_dish.size()) {
            latent.dish_mixtures.push_back(sample_dirichlet(h.zeta, rng));
            tables_per_dish.push_back(0);
          }
        }
        ++tables_per_dish[dish];
        occupancy.push_back(0);
        dishes.push_back(dish);
      }
      ++occupancy[table];
      const DishId dish = dishes[table];
      const auto topic = static_cast<TopicId>(rng.categorical(latent.dish_mixtures[dish]));
      const auto word = static_cast<WordId>(rng.categorical(latent.topics[topic]));
      latent.token_tables[d].push_back(table);
      latent.token_topics[d].push_back(topic);
      tokens[d].push_back(word);
    }
  }

  // Truth: planted category, else the dish generating most of the words.
  std::vector<std::string> names(D);
  std::vector<std::pair<DocId, std::string>> labels;
  for (std::size_t d = 0; d < D; ++d) {
    std::size_t category = 0;
    if (!spec.planted.empty() && spec.planted[d]) {
      category = static_cast<std::size_t>(*spec.planted[d]);
    } else if (!latent.table_dishes[d].empty()) {
      std::vector<std::size_t> votes(tables_per_dish.size(), 0);
      for (TableId t : latent.token_tables[d]) ++votes[latent.table_dishes[d][t]];
      category = latent.table_dishes[d].front();
      for (std::size_t k = 0; k < votes.size(); ++k) {
        const bool more = votes[k] > votes[category];
        const bool tie_wins = votes[k] == votes[category] &&
                              (tables_per_dish[k] > tables_per_dish[category] ||
                               (tables_per_dish[k] == tables_per_dish[category] && k < category));
        if (more || tie_wins) category = k;
      }
    }
    names[d] = category_name(category);
    if (!spec.labeled.empty() && spec.labeled[d]) labels.emplace_back(d, names[d]);
  }

  Corpus corpus = make_corpus(Vocabulary(h.beta.size()), std::move(tokens), labels);
  std::vector<CategoryId> truth = ground_truth_partition(corpus, names);
  return {std::move(corpus), std::move(names), std::move(truth), std::move(latent)};
}

CrfState latent_state(const SyntheticCorpus& sample, const HyperParams& hypers) {
  const Corpus& corpus = sample.corpus;
  const LatentDraw& latent = sample.latent;
  const std::size_t num_latent = latent.dish_mixtures.size();

  std::vector<std::size_t> used(num_latent, 0);
  for (const auto& dishes : latent.table_dishes) {
    for (DishId k : dishes) ++used[k];
  }
  std::vector<DishId> remap(num_latent, kNone);
  auto next = static_cast<DishId>(corpus.num_known());
  for (std::size_t k = 0; k < num_latent; ++k) {
    if (auto known = corpus.known_id(category_name(k))) {
      remap[k] = static_cast<DishId>(*known);
    } else if (used[k] > 0) {
      remap[k] = next++;
    }
  }
  std::vector<std::vector<DishId>> dishes = latent.table_dishes;
  for (auto& doc : dishes) {
    for (DishId& k : doc) k = remap[k];
  }
  return CrfState::from_assignments(corpus, hypers, latent.gamma, latent.alpha,
                                    latent.token_tables, dishes, latent.token_topics);
}

void write_synthetic(const SyntheticCorpus& sample, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_bow(sample.corpus, dir / "corpus.bow");
  write_vocabulary(sample.corpus, dir / "vocab.txt");
  write_labels(sample.corpus, dir / "labels.txt");
  write_truth(sample.truth_names, dir / "truth.txt");
}

}  // namespace lbpl
