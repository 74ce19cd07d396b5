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
#include <span>

#include "lbpl/rng.hpp"

namespace lbpl {

class CrfState;

/// One auxiliary-variable update of the top-level concentration given K
/// dishes served at M tables. The invariant law is
///   p(gamma | K, M) ~ Gamma(gamma; shape, scale) * gamma^K G(gamma)/G(gamma+M).
/// With M == 0 this is a draw from the prior.
double sample_top_concentration(double gamma, std::size_t num_dishes,
                                std::size_t num_tables, double shape, double scale,
                                Rng& rng);

/// One auxiliary-variable update of the document-level concentration. The
/// invariant law is
///   p(alpha | ...) ~ Gamma(alpha; shape, scale) *
///                    prod_d alpha^T_d G(alpha)/G(alpha+n_d)
/// over documents with n_d >= 1.
double sample_doc_concentration(double alpha, std::span<const std::size_t> doc_sizes,
                                std::span<const std::size_t> doc_tables, double shape,
                                double scale, Rng& rng);

double sample_gamma(const CrfState& state, Rng& rng);
double sample_alpha(const CrfState& state, Rng& rng);

}  // namespace lbpl
