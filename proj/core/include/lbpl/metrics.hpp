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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lbpl/corpus.hpp"
#include "lbpl/sampler.hpp"

namespace lbpl {

/// Category assignment of a set of documents, keyed by document id.
using Partition = std::map<DocId, CategoryId>;

/// Builds a partition over `docs` from a per-document assignment vector.
Partition restrict_partition(std::span<const CategoryId> assignment,
                             std::span<const DocId> docs);

/// Cluster-by-class count table; rows follow the first partition's sorted
/// ids, columns the second's.
struct Contingency {
  std::vector<CategoryId> row_ids;
  std::vector<CategoryId> col_ids;
  std::vector<std::vector<std::size_t>> counts;
  std::size_t total = 0;
};

/// Throws std::invalid_argument when the partitions cover different
/// documents or are empty.
Contingency contingency(const Partition& a, const Partition& b);

/// 2 I(A;B) / (H(A) + H(B)) with natural-log entropies; 0 when both
/// partitions are a single cluster. Needs at least two documents.
double nmi(const Partition& a, const Partition& b);

/// Hubert-Arabie adjusted Rand index. When the expected index equals its
/// maximum the partitions are identical up to relabeling and 1 is returned.
double ari(const Partition& a, const Partition& b);

struct ClassScore {
  CategoryId category = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct F1Report {
  double average = 0.0;
  std::vector<ClassScore> per_class;
};

/// Unweighted mean of per-class F1 over the `known` classes; predicted ids
/// share the truth's id space. Zero denominators give 0.
F1Report average_f1(const Partition& predicted, const Partition& truth,
                    std::span<const CategoryId> known);

struct MetricReport {
  std::size_t num_documents = 0;
  double nmi = 0.0;
  double ari = 0.0;
  F1Report f1;
  Contingency table;

  /// JSON document; the schema is described in the README.
  std::string to_json() const;
};

/// All metrics of `predicted` against `truth` over the unlabeled documents
/// of `corpus`, with classes 0..num_known-1 as the known classes.
MetricReport evaluate(const Corpus& corpus, std::span<const CategoryId> predicted,
                      std::span<const CategoryId> truth);

/// Relative frequency of every category count K over post-burn-in sweeps,
/// pooled across traces. Records with iter <= burn_in are skipped.
std::map<std::size_t, double> k_histogram(std::span<const ChainTrace> traces,
                                          std::size_t burn_in);

}  // namespace lbpl
