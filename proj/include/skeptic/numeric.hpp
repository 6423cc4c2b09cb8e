// Copyright 2026 The Skeptic Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace skeptic {

// Smallest probability the library ever produces; keeps predicted
// probabilities in the open interval even for extreme exponents.
inline constexpr double kMinProb = 1e-300;
inline constexpr double kMaxProb = 1.0 - 1.1102230246251565e-16;  // nextafter(1, 0)

// log(e^a + e^b) without overflow.
inline double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(a) && a < 0.0) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(sum_i e^{v_i}), stabilized by the running maximum.
inline double log_sum_exp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (std::isinf(m) && m < 0.0) return m;
  return m + std::log((v.array() - m).exp().sum());
}

inline double logit(double p) { return std::log(p) - std::log1p(-p); }

// 1/(1+e^-z) via tanh; result clamped to the open interval (0, 1).
inline double sigmoid(double z) {
  const double s = 0.5 + 0.5 * std::tanh(0.5 * z);
  return std::clamp(s, kMinProb, kMaxProb);
}

// sigma(z) * (1 - sigma(z)) without cancellation at large |z|.
inline double sigmoid_variance(double z) {
  const double e = std::exp(-std::abs(z));
  const double d = 1.0 + e;
  return e / (d * d);
}

}  // namespace skeptic
