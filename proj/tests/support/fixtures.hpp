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

#include <random>
#include <string>
#include <vector>

#include "lbpl/corpus.hpp"
#include "lbpl/crf_state.hpp"

namespace lbpl::testing {

struct RandomCorpusOptions {
  std::size_t max_docs = 8;
  std::size_t max_vocab = 6;
  std::size_t max_length = 10;
  double label_probability = 0.3;
  std::size_t categories = 2;
};

// Small corpus with random sizes, words and labels; may contain empty documents.
inline Corpus random_corpus(std::mt19937_64& gen, const RandomCorpusOptions& opt = {}) {
  const std::size_t D = 1 + gen() % opt.max_docs;
  const std::size_t P = 1 + gen() % opt.max_vocab;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<WordId>> tokens(D);
  std::vector<std::pair<DocId, std::string>> labels;
  for (std::size_t d = 0; d < D; ++d) {
    const std::size_t n = gen() % (opt.max_length + 1);
    for (std::size_t i = 0; i < n; ++i) tokens[d].push_back(static_cast<WordId>(gen() % P));
    if (opt.categories > 0 && unif(gen) < opt.label_probability) {
      labels.emplace_back(d, "k" + std::to_string(gen() % opt.categories));
    }
  }
  return make_corpus(Vocabulary(P), std::move(tokens), labels);
}

inline HyperParams small_hypers(std::size_t vocab_size, std::size_t topics = 3) {
  HyperParams h = HyperParams::defaults(vocab_size, topics, 0.7, 0.3);
  h.b_gamma = 1.0;
  h.b_alpha = 1.0;
  h.a_alpha = 1.0;
  return h;
}

}  // namespace lbpl::testing
