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
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lbpl {

using WordId = std::uint32_t;
using CategoryId = std::int32_t;
using DocId = std::size_t;

/// Raised for malformed or inconsistent input files. `line` is 1-based and
/// 0 when the problem is not tied to a specific line.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::string file, std::size_t line, const std::string& what);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Terms "0", "1", ... for a vocabulary without a sidecar file.
  explicit Vocabulary(std::size_t size);
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& term(WordId id) const { return terms_.at(id); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> terms_;
};

struct Document {
  DocId id = 0;
  std::vector<WordId> tokens;
  std::optional<CategoryId> label;

  std::size_t size() const noexcept { return tokens.size(); }
  friend bool operator==(const Document&, const Document&) = default;
};

/// Immutable, validated collection of documents. Documents with a label are
/// the labeled training set; the rest are the unlabeled target set.
class Corpus {
 public:
  /// Validates token ids against the vocabulary and labels against
  /// `known_labels`; document ids must equal their position.
  Corpus(Vocabulary vocabulary, std::vector<Document> documents,
         std::vector<std::string> known_labels);

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  std::size_t vocab_size() const noexcept { return vocabulary_.size(); }
  const std::vector<Document>& documents() const noexcept { return documents_; }
  const Document& document(DocId d) const { return documents_.at(d); }
  std::size_t num_documents() const noexcept { return documents_.size(); }
  std::size_t num_tokens() const noexcept { return num_tokens_; }

  /// Category names indexed by their dense known-category id.
  const std::vector<std::string>& known_labels() const noexcept {
    return known_labels_;
  }
  std::size_t num_known() const noexcept { return known_labels_.size(); }
  std::optional<CategoryId> known_id(const std::string& name) const;

  std::vector<DocId> labeled_documents() const;
  std::vector<DocId> unlabeled_documents() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  Vocabulary vocabulary_;
  std::vector<Document> documents_;
  std::vector<std::string> known_labels_;
  std::size_t num_tokens_ = 0;
};

/// Builds a corpus from in-memory (doc, category name) label pairs. Known
/// category ids follow first appearance order in `labels`.
Corpus make_corpus(Vocabulary vocabulary,
                   std::vector<std::vector<WordId>> tokens,
                   const std::vector<std::pair<DocId, std::string>>& labels);

Corpus load_corpus(const std::filesystem::path& bow_path,
                   const std::optional<std::filesystem::path>& labels_path = {},
                   const std::optional<std::filesystem::path>& vocab_path = {});

/// Maps every document to a dense true-category id. Known categories keep
/// their corpus ids; other names get ids |known|, |known|+1, ... in order of
/// first appearance.
std::vector<CategoryId> ground_truth_partition(
    const Corpus& corpus, const std::filesystem::path& truth_path);

/// In-memory variant; `names[d]` is the true category name of document d.
std::vector<CategoryId> ground_truth_partition(
    const Corpus& corpus, const std::vector<std::string>& names);

/// Writes the bow format; consecutive repeats of a word collapse into one
/// (doc, word, count) entry so reloading reproduces the token order.
void write_bow(const Corpus& corpus, const std::filesystem::path& path);
void write_vocabulary(const Corpus& corpus, const std::filesystem::path& path);
void write_labels(const Corpus& corpus, const std::filesystem::path& path);
void write_truth(const std::vector<std::string>& names,
                 const std::filesystem::path& path);

}  // namespace lbpl
