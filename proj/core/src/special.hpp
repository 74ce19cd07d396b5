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

#include <cmath>

namespace lbpl::detail {

// Reentrant log-gamma; std::lgamma writes the global signgam on glibc.
inline double log_gamma(double x) noexcept {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// Log density of Gamma(shape, scale) at x > 0.
inline double log_gamma_density(double x, double shape, double scale) noexcept {
  return (shape - 1.0) * std::log(x) - x / scale - log_gamma(shape) -
         shape * std::log(scale);
}

}  // namespace lbpl::detail
