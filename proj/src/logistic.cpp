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

#include "skeptic/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "skeptic/numeric.hpp"

namespace skeptic {

namespace {

double exponent(const Theta& theta, const Eigen::VectorXd& c) {
  if (theta.size() != c.size()) {
    throw std::invalid_argument("logistic: theta/side-information dimension mismatch");
  }
  const double y = theta.dot(c);
  if (!std::isfinite(y)) throw std::invalid_argument("logistic: non-finite exponent theta'c");
  return y;
}

}  // namespace

double predict(const Theta& theta, double p, const Eigen::VectorXd& c) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("predict: forecast must lie in (0, 1)");
  return sigmoid(logit(p) + exponent(theta, c));
}

double kelly_ratio(double phat, double p) {
  if (!(phat > 0.0 && phat < 1.0) || !(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("kelly_ratio: probabilities must lie in (0, 1)");
  }
  return (phat - p) / (p * (1.0 - p));
}

double potential_term(double p, double y) {
  return log_add_exp(std::log1p(-p), std::log(p) + y);
}

double log_capital_factor(const Theta& theta, const Round& round) {
  validate_round(round);
  const double y = exponent(theta, round.c);
  return round.x * y - potential_term(round.p, y);
}

double log_capital_at(const Theta& theta, std::span<const Round> rounds) {
  double sum = 0.0;
  for (const Round& r : rounds) sum += log_capital_factor(theta, r);
  return sum;
}

PotentialEval potential(const Theta& theta, std::span<const Round> rounds) {
  if (rounds.empty()) throw std::invalid_argument("potential: empty round sequence");
  const auto d = theta.size();
  PotentialEval eval;
  eval.grad = Eigen::VectorXd::Zero(d);
  eval.hess = Eigen::MatrixXd::Zero(d, d);
  for (const Round& r : rounds) {
    const double y = exponent(theta, r.c);
    const double z = logit(r.p) + y;
    eval.value += potential_term(r.p, y);
    eval.grad += r.c * sigmoid(z);
    eval.hess.noalias() += r.c * r.c.transpose() * sigmoid_variance(z);
  }
  return eval;
}

}  // namespace skeptic
