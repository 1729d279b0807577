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

#ifndef PACZERO_BINARY_CHANNEL_H_
#define PACZERO_BINARY_CHANNEL_H_

#include <cstddef>
#include <span>
#include <vector>

// Mutual information of the binary-input Gaussian channel
//
//   xi in {-1, +1},  P(xi = +1) = q_plus,  Y = xi + N(0, sigma^2),
//
// and its inverse in sigma. All quantities are in nats.

namespace paczero {

// Below this noise level the channel is treated as noiseless.
inline constexpr double kNoiselessSigma = 1e-10;

struct ChannelQuery {
  double q_plus = 0.5;
  double sigma = 1.0;

  // Throws DomainError unless 0 <= q_plus <= 1 and sigma >= 0.
  void Validate() const;
};

// h(q) = -q ln q - (1-q) ln(1-q), with 0 ln 0 = 0.
double BinaryEntropy(double q);

// Physicists' Gauss-Hermite rule: integral of exp(-x^2) f(x) dx.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Computes an n-point rule by Newton iteration on the orthonormal Hermite
// recurrence. Nodes are returned in descending order.
GaussHermiteRule ComputeGaussHermiteRule(std::size_t n);

// The 60-node rule used by ChannelMi, computed once.
const GaussHermiteRule& ChannelQuadratureRule();

// I(xi; xi + N(0, sigma^2)) by 60-node Gauss-Hermite quadrature with
// log-sum-exp evaluation of the mixture density.
double ChannelMi(const ChannelQuery& query);

// Same integral by the composite trapezoid rule on [-halfwidth, +halfwidth].
// Test oracle only; requires halfwidth >= 1 + 8 sigma and >= 10^4 points.
double ChannelMiOracle(const ChannelQuery& query, double grid_halfwidth,
                       std::size_t grid_points);

struct InversionOptions {
  double log_sigma_tolerance = 1e-12;
  double mi_tolerance = 1e-10;
  double initial_lo = 1e-6;
  double initial_hi = 1e6;
  double widest_lo = 1e-12;
  double widest_hi = 1e12;
};

// Returns sigma with ChannelMi({q_plus, sigma}) == beta, by bisection in
// log sigma. Requires q_plus in (0,1) and 0 < beta < BinaryEntropy(q_plus).
double InvertChannelMi(double q_plus, double beta,
                       const InversionOptions& options = {});

}  // namespace paczero

#endif  // PACZERO_BINARY_CHANNEL_H_
