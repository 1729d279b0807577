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

#include "paczero/binary_channel.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "paczero/errors.h"

namespace paczero {
namespace {

constexpr std::size_t kChannelNodes = 60;

bool IsProbability(double q) { return q >= 0.0 && q <= 1.0; }

// log((1 - p) + p * exp(a)), stable for any a and p in [0, 1]. The branch
// factors out the larger of the two exponentials.
double LogMixture(double p, double a) {
  if (a <= 0.0) return std::log1p(p * std::expm1(a));
  return a + std::log1p((1.0 - p) * std::expm1(-a));
}

double LogAddExp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

}  // namespace

void ChannelQuery::Validate() const {
  if (!IsProbability(q_plus)) {
    throw DomainError("q_plus must lie in [0, 1], got " +
                      std::to_string(q_plus));
  }
  if (!(sigma >= 0.0)) {
    throw DomainError("sigma must be nonnegative, got " +
                      std::to_string(sigma));
  }
}

double BinaryEntropy(double q) {
  if (!IsProbability(q)) {
    throw DomainError("binary entropy needs q in [0, 1], got " +
                      std::to_string(q));
  }
  if (q == 0.0 || q == 1.0) return 0.0;
  return -q * std::log(q) - (1.0 - q) * std::log1p(-q);
}

GaussHermiteRule ComputeGaussHermiteRule(std::size_t n) {
  if (n == 0) throw DomainError("Gauss-Hermite rule needs n >= 1");
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  const double dn = static_cast<double>(n);
  const std::size_t half = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    // Asymptotic starting guesses for the largest roots, then extrapolation
    // from the two previous roots.
    if (i == 0) {
      z = std::sqrt(2.0 * dn + 1.0) - 1.85575 * std::pow(2.0 * dn + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(dn, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * rule.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * rule.nodes[1];
    } else {
      z = 2.0 * z - rule.nodes[i - 2];
    }
    double derivative = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double dj = static_cast<double>(j);
        p1 = z * std::sqrt(2.0 / dj) * p2 - std::sqrt((dj - 1.0) / dj) * p3;
      }
      derivative = std::sqrt(2.0 * dn) * p2;
      const double previous = z;
      z = previous - p1 / derivative;
      if (std::abs(z - previous) <= 3e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = 2.0 / (derivative * derivative);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  if (n % 2 == 1) rule.nodes[half - 1] = 0.0;
  return rule;
}

const GaussHermiteRule& ChannelQuadratureRule() {
  static const GaussHermiteRule rule = ComputeGaussHermiteRule(kChannelNodes);
  return rule;
}

double ChannelMi(const ChannelQuery& query) {
  query.Validate();
  const double q = query.q_plus;
  if (q == 0.0 || q == 1.0) return 0.0;
  const double entropy = BinaryEntropy(q);
  if (query.sigma < kNoiselessSigma) return entropy;

  // Substituting y = xi + sqrt(2) sigma x, the log-likelihood ratio of the
  // opposite component is a(x) = -2/sigma^2 - 2 sqrt(2) x / sigma for xi=+1;
  // the xi=-1 term is its mirror image under x -> -x.
  const GaussHermiteRule& rule = ChannelQuadratureRule();
  const double offset = 2.0 / (query.sigma * query.sigma);
  const double slope = 2.0 * std::numbers::sqrt2 / query.sigma;
  double plus_term = 0.0;
  double minus_term = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double a = -offset - slope * rule.nodes[i];
    plus_term -= rule.weights[i] * LogMixture(1.0 - q, a);
    minus_term -= rule.weights[i] * LogMixture(q, a);
  }
  const double mi =
      (q * plus_term + (1.0 - q) * minus_term) / std::sqrt(std::numbers::pi);
  return std::clamp(mi, 0.0, entropy);
}

double ChannelMiOracle(const ChannelQuery& query, double grid_halfwidth,
                       std::size_t grid_points) {
  query.Validate();
  if (grid_halfwidth < 1.0 + 8.0 * query.sigma || grid_points < 10000) {
    throw DomainError(
        "oracle grid must cover [-(1 + 8 sigma), 1 + 8 sigma] with at least "
        "10^4 points");
  }
  const double q = query.q_plus;
  if (q == 0.0 || q == 1.0) return 0.0;
  const double sigma = query.sigma;
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);

  auto integrand = [&](double y) {
    const double lp = log_norm - (y - 1.0) * (y - 1.0) / (2.0 * sigma * sigma);
    const double lm = log_norm - (y + 1.0) * (y + 1.0) / (2.0 * sigma * sigma);
    const double log_mix = LogAddExp(log_q + lp, log_1mq + lm);
    return q * std::exp(lp) * (lp - log_mix) +
           (1.0 - q) * std::exp(lm) * (lm - log_mix);
  };

  const double h = 2.0 * grid_halfwidth / static_cast<double>(grid_points - 1);
  double sum = 0.5 * (integrand(-grid_halfwidth) + integrand(grid_halfwidth));
  for (std::size_t k = 1; k + 1 < grid_points; ++k) {
    sum += integrand(-grid_halfwidth + h * static_cast<double>(k));
  }
  return sum * h;
}

double InvertChannelMi(double q_plus, double beta,
                       const InversionOptions& options) {
  if (!IsProbability(q_plus)) {
    throw DomainError("q_plus must lie in [0, 1], got " +
                      std::to_string(q_plus));
  }
  if (q_plus == 0.0 || q_plus == 1.0) {
    throw UnanimityError("unanimous input needs no calibration");
  }
  if (!(beta > 0.0)) {
    throw DomainError("MI target must be positive, got " +
                      std::to_string(beta));
  }
  const double entropy = BinaryEntropy(q_plus);
  if (beta >= entropy) {
    throw InfeasibleBudgetError("MI target " + std::to_string(beta) +
                                " is not below h(q) = " +
                                std::to_string(entropy));
  }

  auto mi = [q_plus](double sigma) { return ChannelMi({q_plus, sigma}); };

  double lo = options.initial_lo;
  double hi = options.initial_hi;
  while (mi(lo) <= beta && lo > options.widest_lo) lo /= 10.0;
  while (mi(hi) >= beta && hi < options.widest_hi) hi *= 10.0;
  if (mi(lo) <= beta || mi(hi) >= beta) {
    throw InfeasibleBudgetError("MI target " + std::to_string(beta) +
                                " not bracketed on the widest sigma range");
  }

  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  while (log_hi - log_lo > options.log_sigma_tolerance) {
    const double log_mid = 0.5 * (log_lo + log_hi);
    const double sigma = std::exp(log_mid);
    const double value = mi(sigma);
    if (std::abs(value - beta) < options.mi_tolerance) return sigma;
    if (value > beta) {
      log_lo = log_mid;
    } else {
      log_hi = log_mid;
    }
  }
  return std::exp(0.5 * (log_lo + log_hi));
}

}  // namespace paczero
