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

#include <span>

#include <Eigen/Dense>

#include "skeptic/game.hpp"

namespace skeptic {

// Natural parameter of the logistic betting model
//   log(phat/(1-phat)) = log(p/(1-p)) + theta'c.
using Theta = Eigen::VectorXd;

// Skeptic's probability phat = p e^{theta'c} / (1 + p (e^{theta'c} - 1)),
// evaluated on the log-odds scale so the result stays in (0, 1) even for
// large |theta'c|.  Rejects non-finite exponents.
double predict(const Theta& theta, double p, const Eigen::VectorXd& c);

// Log-growth-optimal bet fraction nu = (phat - p) / (p (1 - p)).  For any
// phat in (0, 1) the result is strictly admissible.
double kelly_ratio(double phat, double p);

// One round's potential term psi_i = log(1 + p (e^y - 1)) for y = theta'c,
// computed as logaddexp(log(1-p), log(p) + y) to avoid cancellation when
// |y| is large.
double potential_term(double p, double y);

// Log of the per-round capital factor, x*y - psi_i(y).  Equals
// log(1 + nu (x - p)) for the Kelly ratio derived from predict().
double log_capital_factor(const Theta& theta, const Round& round);

// Sum of log capital factors: log K^theta = theta'T_n - psi(theta).
double log_capital_at(const Theta& theta, std::span<const Round> rounds);

// The cumulant generating function psi(theta) = sum_i psi_i(theta) with
// derivatives.  grad = sum c_i phat_i; hess = sum c_i c_i' phat_i(1-phat_i),
// the Fisher information in the natural parameter.
struct PotentialEval {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

PotentialEval potential(const Theta& theta, std::span<const Round> rounds);

}  // namespace skeptic
