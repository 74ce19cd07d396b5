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

#include "lbpl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace lbpl {
namespace {

double entropy(const std::vector<std::size_t>& sizes, double total) {
  double h = 0.0;
  for (std::size_t s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / total;
    h -= p * std::log(p);
  }
  return h;
}

double pairs(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

Partition restrict_partition(std::span<const CategoryId> assignment,
                             std::span<const DocId> docs) {
  Partition out;
  for (DocId d : docs) out.emplace(d, assignment[d]);
  return out;
}

Contingency contingency(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw std::invalid_argument("partitions cover different documents");
  if (a.empty()) throw std::invalid_argument("partitions are empty");
  Contingency table;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first) {
      throw std::invalid_argument("partitions cover different documents");
    }
    table.row_ids.push_back(ia->second);
    table.col_ids.push_back(ib->second);
  }
  auto unique_sorted = [](std::vector<CategoryId>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  };
  unique_sorted(table.row_ids);
  unique_sorted(table.col_ids);
  table.counts.assign(table.row_ids.size(), std::vector<std::size_t>(table.col_ids.size(), 0));
  auto index_of = [](const std::vector<CategoryId>& ids, CategoryId id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    ++table.counts[index_of(table.row_ids, ia->second)][index_of(table.col_ids, ib->second)];
  }
  table.total = a.size();
  return table;
}

double nmi(const Partition& a, const Partition& b) {
  const Contingency table = contingency(a, b);
  if (table.total < 2) throw std::invalid_argument("nmi needs at least two documents");
  const double n = static_cast<double>(table.total);
  std::vector<std::size_t> rows(table.row_ids.size(), 0), cols(table.col_ids.size(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      rows[i] += table.counts[i][j];
      cols[j] += table.counts[i][j];
    }
  }
  const double ha = entropy(rows, n);
  const double hb = entropy(cols, n);
  if (ha + hb <= 0.0) return 0.0;
  double mutual = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double c = static_cast<double>(table.counts[i][j]);
      if (c == 0) continue;
      mutual += (c / n) * std::log(c * n / (static_cast<double>(rows[i]) * cols[j]));
    }
  }
  return std::clamp(2.0 * mutual / (ha + hb), 0.0, 1.0);
}

double ari(const Partition& a, const Partition& b) {
  const Contingency table = contingency(a, b);
  if (table.total < 2) throw std::invalid_argument("ari needs at least two documents");
  std::vector<double> rows(table.row_ids.size(), 0.0), cols(table.col_ids.size(), 0.0);
  double index = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double c = static_cast<double>(table.counts[i][j]);
      index += pairs(c);
      rows[i] += c;
      cols[j] += c;
    }
  }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (double r : rows) sum_rows += pairs(r);
  for (double c : cols) sum_cols += pairs(c);
  const double expected = sum_rows * sum_cols / pairs(static_cast<double>(table.total));
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return index == maximum ? 1.0 : 0.0;
  return (index - expected) / (maximum - expected);
}

F1Report average_f1(const Partition& predicted, const Partition& truth,
                    std::span<const CategoryId> known) {
  if (known.empty()) throw std::invalid_argument("average_f1 needs at least one known class");
  contingency(predicted, truth);  // validates the document sets
  F1Report report;
  for (CategoryId c : known) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (auto ip = predicted.begin(), it = truth.begin(); ip != predicted.end(); ++ip, ++it) {
      const bool p = ip->second == c;
      const bool t = it->second == c;
      tp += p && t;
      fp += p && !t;
      fn += !p && t;
    }
    ClassScore score;
    score.category = c;
    score.precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    score.recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double denom = score.precision + score.recall;
    score.f1 = denom > 0 ? 2.0 * score.precision * score.recall / denom : 0.0;
    report.average += score.f1;
    report.per_class.push_back(score);
  }
  report.average /= static_cast<double>(known.size());
  return report;
}

MetricReport evaluate(const Corpus& corpus, std::span<const CategoryId> predicted,
                      std::span<const CategoryId> truth) {
  const auto docs = corpus.unlabeled_documents();
  const Partition pred = restrict_partition(predicted, docs);
  const Partition gold = restrict_partition(truth, docs);
  MetricReport report;
  report.num_documents = docs.size();
  report.table = contingency(pred, gold);
  if (docs.size() >= 2) {
    report.nmi = nmi(pred, gold);
    report.ari = ari(pred, gold);
  }
  if (corpus.num_known() > 0) {
    std::vector<CategoryId> known(corpus.num_known());
    for (std::size_t k = 0; k < known.size(); ++k) known[k] = static_cast<CategoryId>(k);
    report.f1 = average_f1(pred, gold, known);
  }
  return report;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["num_documents"] = num_documents;
  doc["nmi"] = nmi;
  doc["ari"] = ari;
  doc["avg_f1"] = f1.average;
  auto& classes = doc["per_class"] = nlohmann::ordered_json::array();
  for (const auto& score : f1.per_class) {
    classes.push_back({{"category", score.category},
                       {"precision", score.precision},
                       {"recall", score.recall},
                       {"f1", score.f1}});
  }
  doc["contingency"] = {{"predicted_ids", table.row_ids},
                        {"truth_ids", table.col_ids},
                        {"counts", table.counts}};
  return doc.dump(2) + "\n";
}

std::map<std::size_t, double> k_histogram(std::span<const ChainTrace> traces,
                                          std::size_t burn_in) {
  std::map<std::size_t, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& trace : traces) {
    for (const auto& record : trace) {
      if (record.iter <= burn_in) continue;
      ++counts[record.num_dishes];
      ++total;
    }
  }
  std::map<std::size_t, double> histogram;
  for (const auto& [k, c] : counts) {
    histogram[k] = static_cast<double>(c) / static_cast<double>(total);
  }
  return histogram;
}

}  // namespace lbpl
