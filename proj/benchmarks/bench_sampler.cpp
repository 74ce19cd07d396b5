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

#include <benchmark/benchmark.h>

#include "lbpl/generative.hpp"
#include "lbpl/predictive.hpp"
#include "lbpl/sampler.hpp"

namespace {

lbpl::SyntheticCorpus planted(std::size_t num_docs) {
  lbpl::PlantedCorpusOptions options;
  options.num_docs = num_docs;
  lbpl::Rng rng(11, 0, 0);
  return lbpl::forward_sample(lbpl::planted_spec(options), rng);
}

// One full sweep; arguments are the document count (50 tokens each) and L.
void BM_Sweep(benchmark::State& bench) {
  const auto sample = planted(static_cast<std::size_t>(bench.range(0)));
  const auto topics = static_cast<std::size_t>(bench.range(1));
  const lbpl::HyperParams hypers = lbpl::HyperParams::defaults(200, topics);
  lbpl::CrfState state = lbpl::init_state(sample.corpus, hypers, 3);
  lbpl::GibbsSampler sampler;
  std::size_t iter = 0;
  for (auto _ : bench) {
    sampler.sweep(state, 3, ++iter);
    benchmark::DoNotOptimize(state.total_tables());
  }
  const auto tokens = static_cast<std::int64_t>(sample.corpus.num_tokens());
  bench.SetItemsProcessed(bench.iterations() * tokens);
}
BENCHMARK(BM_Sweep)
    ->ArgsProduct({{200, 400, 800}, {16, 128}})
    ->Unit(benchmark::kMillisecond);

void BM_InitState(benchmark::State& bench) {
  const auto sample = planted(static_cast<std::size_t>(bench.range(0)));
  const lbpl::HyperParams hypers = lbpl::HyperParams::defaults(200, 128);
  std::uint64_t seed = 0;
  for (auto _ : bench) {
    auto state = lbpl::init_state(sample.corpus, hypers, ++seed);
    benchmark::DoNotOptimize(state.total_tables());
  }
}
BENCHMARK(BM_InitState)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

void BM_BlockPredictive(benchmark::State& bench) {
  const auto sample = planted(200);
  const lbpl::CrfState state = lbpl::latent_state(sample, lbpl::planted_spec({}).hypers);
  const auto counts = state.table_topic_counts(0).front();
  for (auto _ : bench) {
    for (lbpl::DishId k = 0; k < state.num_dishes(); ++k) {
      benchmark::DoNotOptimize(lbpl::table_block_log_predictive(state, counts, k));
    }
  }
}
BENCHMARK(BM_BlockPredictive);

}  // namespace

BENCHMARK_MAIN();
