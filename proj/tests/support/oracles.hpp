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

// Reference implementations written from the definitions, independent of the
// code paths they check. Used only by tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace lbpl::oracle {

// log B(a) = sum_i lgamma(a_i) - lgamma(sum_i a_i)
inline double log_beta(const std::vector<double>& a) {
  double sum = 0.0, out = 0.0;
  for (double x : a) {
    out += boost::math::lgamma(x);
    sum += x;
  }
  return out - boost::math::lgamma(sum);
}

// p(y = l | counts) as the ratio of Dirichlet normalizers.
inline double category_predictive(const std::vector<double>& zeta,
                                  const std::vector<int>& counts, std::size_t l) {
  std::vector<double> before(zeta.size()), after(zeta.size());
  for (std::size_t i = 0; i < zeta.size(); ++i) before[i] = after[i] = zeta[i] + counts[i];
  after[l] += 1.0;
  return std::exp(log_beta(after) - log_beta(before));
}

// log p(block histogram | counts) as the ratio of Dirichlet normalizers.
inline double block_log_predictive(const std::vector<double>& zeta,
                                   const std::vector<int>& counts,
                                   const std::vector<int>& block) {
  std::vector<double> before(zeta.size()), after(zeta.size());
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    before[i] = zeta[i] + counts[i];
    after[i] = before[i] + block[i];
  }
  return log_beta(after) - log_beta(before);
}

// Posterior mean of a density known up to a constant on (0, inf), computed as
// a ratio of two quadratures after shifting by the log density at its mode.
template <typename LogDensity>
double posterior_mean(LogDensity log_density) {
  double best_x = 1.0, best = log_density(1.0);
  for (double lx = -12.0; lx <= 8.0; lx += 0.01) {
    const double x = std::exp(lx);
    const double v = log_density(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // Rescale so the integrands are O(1) around the mode.
  const double scale = best_x;
  auto unnormalized = [&](double u) { return std::exp(log_density(u * scale) - best); };
  boost::math::quadrature::exp_sinh<double> integrator;
  const double z = integrator.integrate(unnormalized);
  const double first = integrator.integrate([&](double u) { return u * unnormalized(u); });
  return scale * first / z;
}

// p(gamma | K, M) ~ Gamma(shape, scale) * gamma^K G(gamma) / G(gamma + M)
inline double gamma_posterior_mean(double shape, double scale, double K, double M) {
  return posterior_mean([=](double g) {
    return (shape - 1.0) * std::log(g) - g / scale + K * std::log(g) +
           boost::math::lgamma(g) - boost::math::lgamma(g + M);
  });
}

// p(alpha | {n_d, T_d}) ~ Gamma(shape, scale) * prod_d alpha^T_d G(alpha)/G(alpha+n_d)
inline double alpha_posterior_mean(double shape, double scale,
                                   const std::vector<std::size_t>& sizes,
                                   const std::vector<std::size_t>& tables) {
  return posterior_mean([=](double a) {
    double v = (shape - 1.0) * std::log(a) - a / scale;
    for (std::size_t d = 0; d < sizes.size(); ++d) {
      if (sizes[d] == 0) continue;
      v += tables[d] * std::log(a) + boost::math::lgamma(a) -
           boost::math::lgamma(a + static_cast<double>(sizes[d]));
    }
    return v;
  });
}

// NMI from probabilities by definition: I(A;B) = H(A) - H(A|B).
inline double nmi(const std::vector<int>& a, const std::vector<int>& b) {
  const double n = static_cast<double>(a.size());
  std::map<int, int> ca, cb;
  std::map<std::pair<int, int>, int> cab;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++ca[a[i]];
    ++cb[b[i]];
    ++cab[{a[i], b[i]}];
  }
  double ha = 0.0, hb = 0.0, ha_given_b = 0.0;
  for (auto [k, c] : ca) ha -= (c / n) * std::log(c / n);
  for (auto [k, c] : cb) hb -= (c / n) * std::log(c / n);
  for (auto [key, c] : cab) {
    ha_given_b -= (c / n) * std::log(static_cast<double>(c) / cb[key.second]);
  }
  if (ha + hb == 0.0) return 0.0;
  return 2.0 * (ha - ha_given_b) / (ha + hb);
}

// ARI by enumerating every pair of items.
inline double ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double same_both = 0, diff_both = 0, same_a = 0, same_b = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j];
      const bool sb = b[i] == b[j];
      same_both += sa && sb;
      diff_both += !sa && !sb;
      same_a += sa;
      same_b += sb;
      pairs += 1;
    }
  }
  const double ri = (same_both + diff_both) / pairs;
  const double expected = (pairs - same_a - same_b + 2.0 * same_a * same_b / pairs) / pairs;
  if (expected == 1.0) return ri == 1.0 ? 1.0 : 0.0;
  return (ri - expected) / (1.0 - expected);
}

// Minimal franchise seating simulation: returns (K, M) for one draw.
inline std::pair<std::size_t, std::size_t> simulate_franchise(
    std::size_t docs, std::size_t tokens, double gamma, double alpha, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::size_t> dish_tables;
  std::size_t total_tables = 0;
  for (std::size_t d = 0; d < docs; ++d) {
    std::size_t doc_tables = 0;
    for (std::size_t i = 0; i < tokens; ++i) {
      // New table with probability alpha / (i + alpha).
      if (unif(gen) * (static_cast<double>(i) + alpha) < alpha) {
        ++doc_tables;
        ++total_tables;
        const double u = unif(gen) * (static_cast<double>(total_tables - 1) + gamma);
        double acc = 0.0;
        bool placed = false;
        for (auto& m : dish_tables) {
          acc += static_cast<double>(m);
          if (u < acc) {
            ++m;
            placed = true;
            break;
          }
        }
        if (!placed) dish_tables.push_back(1);
      }
    }
  }
  return {dish_tables.size(), total_tables};
}

inline double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

inline double standard_error(const std::vector<double>& x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

// Standard error of the mean of a correlated series by non-overlapping batch means.
inline double batch_means_error(const std::vector<double>& x, std::size_t batches = 100) {
  const std::size_t size = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < size; ++i) s += x[b * size + i];
    means[b] = s / static_cast<double>(size);
  }
  return standard_error(means);
}

}  // namespace lbpl::oracle
