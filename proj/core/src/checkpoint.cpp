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

#include "lbpl/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace lbpl {
namespace {

constexpr const char* kMagic = "lbpl-ntm-checkpoint";
constexpr int kVersion = 1;

class TokenReader {
 public:
  TokenReader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}

  std::string word() {
    std::string token;
    if (!(in_ >> token)) throw CorpusError(file_, 0, "unexpected end of checkpoint");
    return token;
  }

  void expect(const std::string& keyword) {
    const std::string token = word();
    if (token != keyword) {
      throw CorpusError(file_, 0, "expected \"" + keyword + "\", found \"" + token + "\"");
    }
  }

  double real() {
    const std::string token = word();
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw CorpusError(file_, 0, "invalid number \"" + token + "\"");
    }
    return value;
  }

  std::uint64_t count() {
    const std::string token = word();
    char* end = nullptr;
    const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
    if (token.empty() || token[0] == '-' || end != token.c_str() + token.size()) {
      throw CorpusError(file_, 0, "invalid count \"" + token + "\"");
    }
    return value;
  }

 private:
  std::istream& in_;
  std::string file_;
};

}  // namespace

void save_checkpoint(const CrfState& state, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CorpusError(path.string(), 0, "cannot open file for writing");
  const HyperParams& h = state.hypers();
  out << std::hexfloat;
  out << kMagic << ' ' << kVersion << '\n';
  out << "topics " << h.num_topics << "\nzeta";
  for (double z : h.zeta) out << ' ' << z;
  out << "\nvocab " << h.beta.size() << "\nbeta";
  for (double b : h.beta) out << ' ' << b;
  out << "\na_gamma " << h.a_gamma << "\nb_gamma " << h.b_gamma << "\na_alpha "
      << h.a_alpha << "\nb_alpha " << h.b_alpha << '\n';
  out << "gamma " << state.gamma() << "\nalpha " << state.alpha() << '\n';
  out << "documents " << state.num_documents() << '\n';
  for (std::size_t d = 0; d < state.num_documents(); ++d) {
    out << "doc " << d << ' ' << state.doc_size(d) << ' ' << state.num_tables(d)
        << "\ndishes";
    for (const Table& table : state.tables(d)) out << ' ' << table.dish;
    out << "\ntables";
    for (TableId t : state.token_tables(d)) out << ' ' << t;
    out << "\ntopics";
    for (TopicId l : state.topics(d)) out << ' ' << l;
    out << '\n';
  }
  if (!out) throw CorpusError(path.string(), 0, "write failed");
}

CrfState load_checkpoint(const Corpus& corpus, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError(path.string(), 0, "cannot open file");
  TokenReader reader(in, path.string());
  reader.expect(kMagic);
  if (reader.count() != static_cast<std::uint64_t>(kVersion)) {
    throw CorpusError(path.string(), 0, "unsupported checkpoint version");
  }

  HyperParams hypers;
  reader.expect("topics");
  hypers.num_topics = reader.count();
  reader.expect("zeta");
  hypers.zeta.resize(hypers.num_topics);
  for (double& z : hypers.zeta) z = reader.real();
  reader.expect("vocab");
  const std::uint64_t vocab = reader.count();
  if (vocab != corpus.vocab_size()) {
    throw CorpusError(path.string(), 0, "vocabulary size does not match corpus");
  }
  reader.expect("beta");
  hypers.beta.resize(vocab);
  for (double& b : hypers.beta) b = reader.real();
  reader.expect("a_gamma");
  hypers.a_gamma = reader.real();
  reader.expect("b_gamma");
  hypers.b_gamma = reader.real();
  reader.expect("a_alpha");
  hypers.a_alpha = reader.real();
  reader.expect("b_alpha");
  hypers.b_alpha = reader.real();
  reader.expect("gamma");
  const double gamma = reader.real();
  reader.expect("alpha");
  const double alpha = reader.real();

  reader.expect("documents");
  const std::uint64_t num_docs = reader.count();
  if (num_docs != corpus.num_documents()) {
    throw CorpusError(path.string(), 0, "document count does not match corpus");
  }
  std::vector<std::vector<TableId>> token_tables(num_docs);
  std::vector<std::vector<DishId>> table_dishes(num_docs);
  std::vector<std::vector<TopicId>> token_topics(num_docs);
  for (std::size_t d = 0; d < num_docs; ++d) {
    reader.expect("doc");
    if (reader.count() != d) throw CorpusError(path.string(), 0, "documents out of order");
    const std::uint64_t size = reader.count();
    const std::uint64_t num_tables = reader.count();
    if (size != corpus.document(d).size()) {
      throw CorpusError(path.string(), 0,
                        "length of document " + std::to_string(d) + " does not match corpus");
    }
    reader.expect("dishes");
    table_dishes[d].resize(num_tables);
    for (DishId& k : table_dishes[d]) k = static_cast<DishId>(reader.count());
    reader.expect("tables");
    token_tables[d].resize(size);
    for (TableId& t : token_tables[d]) t = static_cast<TableId>(reader.count());
    reader.expect("topics");
    token_topics[d].resize(size);
    for (TopicId& l : token_topics[d]) l = static_cast<TopicId>(reader.count());
  }
  return CrfState::from_assignments(corpus, std::move(hypers), gamma, alpha, token_tables,
                                    table_dishes, token_topics);
}

}  // namespace lbpl
