//
// Copyright 2026 The paczero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference computations used by the tests. Each one is written from the
// definition and shares no code with the library.

#ifndef PACZERO_TESTS_ORACLES_H_
#define PACZERO_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace paczero::testing {

inline double EntropyOf(double q) {
  double h = 0.0;
  if (q > 0.0) h -= q * std::log(q);
  if (q < 1.0) h -= (1.0 - q) * std::log(1.0 - q);
  return h;
}

// I(xi; xi + N(0, s^2)) as h(Y) - h(Y | xi): the differential entropy of the
// two-component mixture by the trapezoid rule, minus that of the noise.
inline double TrapezoidChannelMi(double q, double sigma) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  const double half = 1.0 + 10.0 * sigma;
  const double span = 2.0 * half;
  const std::size_t points = static_cast<std::size_t>(
      std::max(20001.0, std::ceil(40.0 * span / sigma) + 1.0));
  const double dx = span / static_cast<double>(points - 1);
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * sigma * sigma);
  double integral = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double y = -half + dx * static_cast<double>(i);
    const double a = std::log(q) - (y - 1.0) * (y - 1.0) / (2.0 * sigma * sigma);
    const double b =
        std::log(1.0 - q) - (y + 1.0) * (y + 1.0) / (2.0 * sigma * sigma);
    const double hi = std::max(a, b);
    const double log_f = log_norm + hi + std::log(std::exp(a - hi) + std::exp(b - hi));
    const double term = -std::exp(log_f) * log_f;
    integral += (i == 0 || i + 1 == points) ? 0.5 * term : term;
  }
  const double mixture_entropy = integral * dx;
  const double noise_entropy =
      0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
  return mixture_entropy - noise_entropy;
}

// Plug-in mutual information of paired discrete samples with the
// Miller-Madow bias correction (k - 1) / (2n) on each entropy.
inline double PluginMutualInformation(std::span<const int> x,
                                      std::span<const long> y) {
  const double n = static_cast<double>(x.size());
  std::map<int, double> px;
  std::map<long, double> py;
  std::map<std::pair<int, long>, double> pxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    px[x[i]] += 1.0;
    py[y[i]] += 1.0;
    pxy[{x[i], y[i]}] += 1.0;
  }
  auto entropy = [n](const auto& counts) {
    double h = 0.0;
    for (const auto& [key, c] : counts) h -= (c / n) * std::log(c / n);
    return h + (static_cast<double>(counts.size()) - 1.0) / (2.0 * n);
  };
  return entropy(px) + entropy(py) - entropy(pxy);
}

// Largest p in [prior, 1] with KL(p || prior) <= mi, by plain bisection on
// the KL written out term by term.
inline double KlInverseOracle(double mi, double prior) {
  auto kl = [prior](double p) {
    double v = 0.0;
    if (p > 0.0) v += p * std::log(p / prior);
    if (p < 1.0) v += (1.0 - p) * std::log((1.0 - p) / (1.0 - prior));
    return v;
  };
  double lo = prior;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kl(mid) <= mi ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace paczero::testing

#endif  // PACZERO_TESTS_ORACLES_H_
