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

#include <filesystem>

#include "lbpl/corpus.hpp"
#include "lbpl/crf_state.hpp"

namespace lbpl {

/// Writes hyperparameters, gamma, alpha and the (table, dish, topic)
/// assignments as a flat text file. Reals are written in hexadecimal
/// floating point so reloading is exact.
void save_checkpoint(const CrfState& state, const std::filesystem::path& path);

/// Reads a checkpoint written by save_checkpoint and rebuilds all counts
/// against `corpus`. Throws CorpusError on malformed files and
/// std::invalid_argument when the assignments do not fit the corpus.
CrfState load_checkpoint(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace lbpl
