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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lbpl/corpus.hpp"
#include "lbpl/crf_state.hpp"
#include "lbpl/rng.hpp"

namespace lbpl {

/// Parameters of a forward draw from the model.
struct GenSpec {
  /// Token count of every document; its size is the document count.
  std::vector<std::size_t> doc_lengths;
  /// Topic count, zeta, beta (whose length sets the vocabulary size) and the
  /// Gamma priors for the concentrations.
  HyperParams hypers;
  std::optional<double> fixed_gamma;
  std::optional<double> fixed_alpha;

  /// Optional per-document category forcing. Forced categories are dish ids
  /// 0..C-1, created before any seating; every table of a forced document
  /// serves its category.
  std::vector<std::optional<CategoryId>> planted;
  /// Optional topic distributions for the C planted categories. Categories
  /// without one draw theta from Dir(zeta).
  std::vector<std::vector<double>> planted_mixtures;
  /// Optional per-document flag exposing the planted category as a label in
  /// the generated corpus. Only planted documents may be labeled.
  std::vector<bool> labeled;

  static GenSpec uniform(std::size_t num_docs, std::size_t doc_length, HyperParams hypers);

  std::size_t num_docs() const noexcept { return doc_lengths.size(); }
  std::size_t vocab_size() const noexcept { return hypers.beta.size(); }
  std::size_t num_planted_categories() const;

  /// Throws std::invalid_argument on inconsistent sizes or non-positive values.
  void validate() const;
};

/// Every latent draw behind a synthetic corpus.
struct LatentDraw {
  std::vector<std::vector<TableId>> token_tables;
  std::vector<std::vector<DishId>> table_dishes;
  std::vector<std::vector<TopicId>> token_topics;
  std::vector<std::vector<double>> dish_mixtures;  // theta_k, one per dish
  std::vector<std::vector<double>> topics;         // phi_l, one per topic
  double gamma = 0.0;
  double alpha = 0.0;
};

struct SyntheticCorpus {
  Corpus corpus;
  /// True category name of every document: "c<dish>" of its planted
  /// category, or of the dish generating most of its words.
  std::vector<std::string> truth_names;
  /// Dense truth ids consistent with corpus.known_labels().
  std::vector<CategoryId> truth;
  LatentDraw latent;
};

/// Forward sample: concentrations, then per token a seat from the franchise
/// seating prior, a topic from its dish's theta and a word from the topic's phi.
SyntheticCorpus forward_sample(const GenSpec& spec, Rng& rng);

/// Collapsed state holding the latent assignments of `sample`; dish ids are
/// remapped so that known categories occupy the pinned slots.
CrfState latent_state(const SyntheticCorpus& sample, const HyperParams& hypers);

/// Writes corpus.bow, vocab.txt, labels.txt and truth.txt into `dir`.
void write_synthetic(const SyntheticCorpus& sample, const std::filesystem::path& dir);

/// Topic mixtures for `categories` well separated categories: category c puts
/// `dominance` of its mass evenly on topics l with l % categories == c and
/// spreads the rest evenly over the remaining topics.
std::vector<std::vector<double>> separated_mixtures(std::size_t categories,
                                                    std::size_t num_topics,
                                                    double dominance);

/// Settings for a corpus in which every document belongs to one of
/// `categories` well separated categories.
struct PlantedCorpusOptions {
  std::size_t num_docs = 200;
  std::size_t doc_length = 50;
  std::size_t categories = 4;
  /// Categories 0..known-1 have labeled documents.
  std::size_t known = 2;
  /// Fraction of each known category's documents that carry a label.
  double label_fraction = 0.4;
  std::size_t vocab_size = 200;
  std::size_t num_topics = 8;
  double dominance = 0.9;
  double zeta = 1.0;
  double beta = 0.01;
  double gamma = 1.0;
  double alpha = 1.0;
};

/// Document d is planted in category d % categories. Within each known
/// category the first round(label_fraction * size) documents are labeled.
/// Throws std::invalid_argument on inconsistent options.
GenSpec planted_spec(const PlantedCorpusOptions& options);

std::vector<double> sample_dirichlet(const std::vector<double>& concentration, Rng& rng);

}  // namespace lbpl
