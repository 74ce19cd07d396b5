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

#include "lbpl/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace lbpl {
namespace {

std::string describe(const std::string& file, std::size_t line,
                     const std::string& what) {
  std::ostringstream out;
  out << file;
  if (line > 0) out << ':' << line;
  out << ": " << what;
  return out.str();
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r') {
      ++end;
    }
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool is_blank(std::string_view line) {
  return split_fields(line).empty();
}

template <typename T>
std::optional<T> parse_uint(std::string_view field) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CorpusError(path.string(), 0, "cannot open file for writing");
  return out;
}

struct LabelLine {
  DocId doc;
  std::string name;
  std::size_t line;
};

// Shared reader for the labels and truth files: "doc_id category_name".
std::vector<LabelLine> read_label_lines(const std::filesystem::path& path,
                                        std::size_t num_docs) {
  auto in = open_input(path);
  const std::string file = path.string();
  std::vector<LabelLine> lines;
  std::vector<bool> seen(num_docs, false);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw CorpusError(file, line_no, "expected \"doc_id category_name\"");
    }
    const auto doc = parse_uint<DocId>(fields[0]);
    if (!doc) throw CorpusError(file, line_no, "invalid document id");
    if (*doc >= num_docs) {
      throw CorpusError(file, line_no,
                        "unknown document id " + std::to_string(*doc));
    }
    if (seen[*doc]) {
      throw CorpusError(file, line_no,
                        "duplicate document id " + std::to_string(*doc));
    }
    seen[*doc] = true;
    lines.push_back({*doc, std::string(fields[1]), line_no});
  }
  return lines;
}

}  // namespace

CorpusError::CorpusError(std::string file, std::size_t line,
                         const std::string& what)
    : std::runtime_error(describe(file, line, what)),
      file_(std::move(file)),
      line_(line) {}

Vocabulary::Vocabulary(std::size_t size) {
  terms_.reserve(size);
  for (std::size_t i = 0; i < size; ++i) terms_.push_back(std::to_string(i));
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index.emplace(terms_[i], i).second) {
      throw CorpusError("<vocabulary>", i + 1, "duplicate term \"" + terms_[i] + "\"");
    }
  }
}

Corpus::Corpus(Vocabulary vocabulary, std::vector<Document> documents,
               std::vector<std::string> known_labels)
    : vocabulary_(std::move(vocabulary)),
      documents_(std::move(documents)),
      known_labels_(std::move(known_labels)) {
  if (vocabulary_.size() == 0) {
    throw CorpusError("<corpus>", 0, "vocabulary must be non-empty");
  }
  if (documents_.empty()) {
    throw CorpusError("<corpus>", 0, "corpus must contain at least one document");
  }
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const Document& doc = documents_[d];
    if (doc.id != d) {
      throw CorpusError("<corpus>", 0, "document ids must be dense and ordered");
    }
    for (WordId w : doc.tokens) {
      if (w >= vocabulary_.size()) {
        throw CorpusError("<corpus>", 0,
                          "token id " + std::to_string(w) + " out of range in document " +
                              std::to_string(d));
      }
    }
    if (doc.label && (*doc.label < 0 ||
                      static_cast<std::size_t>(*doc.label) >= known_labels_.size())) {
      throw CorpusError("<corpus>", 0,
                        "label of document " + std::to_string(d) + " is not a known category");
    }
    num_tokens_ += doc.tokens.size();
  }
}

std::optional<CategoryId> Corpus::known_id(const std::string& name) const {
  auto it = std::find(known_labels_.begin(), known_labels_.end(), name);
  if (it == known_labels_.end()) return std::nullopt;
  return static_cast<CategoryId>(it - known_labels_.begin());
}

std::vector<DocId> Corpus::labeled_documents() const {
  std::vector<DocId> out;
  for (const auto& doc : documents_) {
    if (doc.label) out.push_back(doc.id);
  }
  return out;
}

std::vector<DocId> Corpus::unlabeled_documents() const {
  std::vector<DocId> out;
  for (const auto& doc : documents_) {
    if (!doc.label) out.push_back(doc.id);
  }
  return out;
}

Corpus make_corpus(Vocabulary vocabulary,
                   std::vector<std::vector<WordId>> tokens,
                   const std::vector<std::pair<DocId, std::string>>& labels) {
  std::vector<Document> documents(tokens.size());
  for (std::size_t d = 0; d < tokens.size(); ++d) {
    documents[d].id = d;
    documents[d].tokens = std::move(tokens[d]);
  }
  std::vector<std::string> known;
  for (const auto& [doc, name] : labels) {
    if (doc >= documents.size()) {
      throw CorpusError("<labels>", 0, "unknown document id " + std::to_string(doc));
    }
    if (documents[doc].label) {
      throw CorpusError("<labels>", 0, "duplicate document id " + std::to_string(doc));
    }
    auto it = std::find(known.begin(), known.end(), name);
    if (it == known.end()) {
      known.push_back(name);
      it = known.end() - 1;
    }
    documents[doc].label = static_cast<CategoryId>(it - known.begin());
  }
  return Corpus(std::move(vocabulary), std::move(documents), std::move(known));
}

Corpus load_corpus(const std::filesystem::path& bow_path,
                   const std::optional<std::filesystem::path>& labels_path,
                   const std::optional<std::filesystem::path>& vocab_path) {
  auto in = open_input(bow_path);
  const std::string file = bow_path.string();
  std::string line;
  std::size_t line_no = 0;

  std::size_t num_docs = 0, vocab_size = 0, nnz = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    std::optional<std::size_t> values[3];
    if (fields.size() == 3) {
      for (int i = 0; i < 3; ++i) values[i] = parse_uint<std::size_t>(fields[i]);
    }
    if (fields.size() != 3 || !values[0] || !values[1] || !values[2]) {
      throw CorpusError(file, line_no, "expected header \"D P NNZ\"");
    }
    num_docs = *values[0];
    vocab_size = *values[1];
    nnz = *values[2];
    have_header = true;
  }
  if (!have_header) throw CorpusError(file, 0, "missing header line");
  if (num_docs == 0) throw CorpusError(file, line_no, "document count must be positive");
  if (vocab_size == 0) throw CorpusError(file, line_no, "vocabulary size must be positive");

  std::vector<std::vector<WordId>> tokens(num_docs);
  std::size_t entries = 0;
  DocId last_doc = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw CorpusError(file, line_no, "expected \"doc_id word_id count\"");
    }
    const auto doc = parse_uint<DocId>(fields[0]);
    const auto word = parse_uint<std::uint64_t>(fields[1]);
    const auto count = parse_uint<std::size_t>(fields[2]);
    if (!doc || !word || !count) {
      throw CorpusError(file, line_no, "malformed entry");
    }
    if (*doc >= num_docs) {
      throw CorpusError(file, line_no, "document id " + std::to_string(*doc) +
                                           " >= D=" + std::to_string(num_docs));
    }
    if (*word >= vocab_size) {
      throw CorpusError(file, line_no, "word id " + std::to_string(*word) +
                                           " >= P=" + std::to_string(vocab_size));
    }
    if (*count == 0) throw CorpusError(file, line_no, "count must be >= 1");
    if (*doc < last_doc) {
      throw CorpusError(file, line_no, "document ids must be ascending");
    }
    last_doc = *doc;
    tokens[*doc].insert(tokens[*doc].end(), *count, static_cast<WordId>(*word));
    ++entries;
  }
  if (entries != nnz) {
    throw CorpusError(file, 0, "header declares " + std::to_string(nnz) +
                                   " entries but file has " + std::to_string(entries));
  }

  Vocabulary vocabulary(vocab_size);
  if (vocab_path) {
    auto vin = open_input(*vocab_path);
    std::vector<std::string> terms;
    std::string term;
    while (std::getline(vin, term)) {
      if (!term.empty() && term.back() == '\r') term.pop_back();
      terms.push_back(term);
    }
    if (terms.size() != vocab_size) {
      throw CorpusError(vocab_path->string(), 0,
                        "expected " + std::to_string(vocab_size) + " terms, found " +
                            std::to_string(terms.size()));
    }
    try {
      vocabulary = Vocabulary(std::move(terms));
    } catch (const CorpusError& e) {
      throw CorpusError(vocab_path->string(), e.line(), "duplicate term");
    }
  }

  std::vector<std::pair<DocId, std::string>> labels;
  if (labels_path) {
    for (auto& entry : read_label_lines(*labels_path, num_docs)) {
      labels.emplace_back(entry.doc, std::move(entry.name));
    }
  }
  return make_corpus(std::move(vocabulary), std::move(tokens), labels);
}

std::vector<CategoryId> ground_truth_partition(
    const Corpus& corpus, const std::filesystem::path& truth_path) {
  const auto lines = read_label_lines(truth_path, corpus.num_documents());
  std::vector<std::string> names(corpus.num_documents());
  std::vector<bool> covered(corpus.num_documents(), false);
  for (const auto& entry : lines) {
    names[entry.doc] = entry.name;
    covered[entry.doc] = true;
    const auto& label = corpus.document(entry.doc).label;
    if (label && corpus.known_labels()[*label] != entry.name) {
      throw CorpusError(truth_path.string(), entry.line,
                        "truth \"" + entry.name + "\" disagrees with label \"" +
                            corpus.known_labels()[*label] + "\" of document " +
                            std::to_string(entry.doc));
    }
  }
  for (std::size_t d = 0; d < covered.size(); ++d) {
    if (!covered[d]) {
      throw CorpusError(truth_path.string(), 0,
                        "missing truth for document " + std::to_string(d));
    }
  }
  return ground_truth_partition(corpus, names);
}

std::vector<CategoryId> ground_truth_partition(
    const Corpus& corpus, const std::vector<std::string>& names) {
  if (names.size() != corpus.num_documents()) {
    throw CorpusError("<truth>", 0, "truth must cover every document");
  }
  std::map<std::string, CategoryId> ids;
  for (std::size_t k = 0; k < corpus.num_known(); ++k) {
    ids.emplace(corpus.known_labels()[k], static_cast<CategoryId>(k));
  }
  std::vector<CategoryId> truth(names.size());
  for (std::size_t d = 0; d < names.size(); ++d) {
    const auto& label = corpus.document(d).label;
    if (label && corpus.known_labels()[*label] != names[d]) {
      throw CorpusError("<truth>", 0,
                        "truth disagrees with label of document " + std::to_string(d));
    }
    auto [it, inserted] = ids.emplace(names[d], static_cast<CategoryId>(ids.size()));
    truth[d] = it->second;
  }
  return truth;
}

void write_bow(const Corpus& corpus, const std::filesystem::path& path) {
  std::ostringstream body;
  std::size_t nnz = 0;
  for (const auto& doc : corpus.documents()) {
    std::size_t i = 0;
    while (i < doc.tokens.size()) {
      std::size_t j = i;
      while (j < doc.tokens.size() && doc.tokens[j] == doc.tokens[i]) ++j;
      body << doc.id << ' ' << doc.tokens[i] << ' ' << (j - i) << '\n';
      ++nnz;
      i = j;
    }
  }
  auto out = open_output(path);
  out << corpus.num_documents() << ' ' << corpus.vocab_size() << ' ' << nnz << '\n'
      << body.str();
}

void write_vocabulary(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& term : corpus.vocabulary().terms()) out << term << '\n';
}

void write_labels(const Corpus& corpus, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const auto& doc : corpus.documents()) {
    if (doc.label) out << doc.id << ' ' << corpus.known_labels()[*doc.label] << '\n';
  }
}

void write_truth(const std::vector<std::string>& names,
                 const std::filesystem::path& path) {
  auto out = open_output(path);
  for (std::size_t d = 0; d < names.size(); ++d) out << d << ' ' << names[d] << '\n';
}

}  // namespace lbpl
