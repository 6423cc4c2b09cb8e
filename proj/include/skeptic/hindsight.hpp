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

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "skeptic/game.hpp"
#include "skeptic/logistic.hpp"
#include "skeptic/mixture.hpp"

namespace skeptic {

// Best constant parameter in retrospect: theta* = argmax log K^theta.
// Equivalently the maximum likelihood estimate of the logistic model and
// the best constant rebalanced portfolio.
struct MleResult {
  Theta theta_star;
  double log_capital = 0.0;
  Eigen::MatrixXd hess;     // H_psi(theta*), the Fisher information
  double grad_norm = 0.0;   // ||T_n - grad psi(theta*)||
  bool converged = false;
  int iterations = 0;
  // Set when the data are separated (the maximizer runs to infinity);
  // unit direction of recession.
  std::optional<Eigen::VectorXd> recession;
};

struct MleOptions {
  double tol = 1e-10;   // relative gradient tolerance
  int max_iter = 100;
  double theta_max = 50.0;  // iterate norm declaring separation
};

// Damped Newton on the concave log K^theta.  Convergence requires both
// ||T - grad psi|| <= tol (1 + ||T||) and a vanishing Newton step; on
// separated data the gradient alone can meet the tolerance while the
// maximizer escapes to infinity.
MleResult mle(std::span<const Round> rounds, const Theta& init, const MleOptions& options = {});
MleResult mle(std::span<const Round> rounds, const MleOptions& options = {});

// Solves the likelihood equation grad psi(theta) = target for an
// arbitrary target vector t; mle() is the special case t = sum c_i x_i.
MleResult mle_for_target(std::span<const Round> rounds, const Eigen::VectorXd& target,
                         const Theta& init, const MleOptions& options = {});

// log K^theta* + log pi(theta*) + (d/2) log(2 pi) - (1/2) log det H.
// Invalid (flagged) when theta* falls outside the prior's support.
struct LaplaceResult {
  double value = 0.0;
  bool in_support = false;
};
LaplaceResult laplace_log_capital(const MleResult& mle_result, const PriorSpec& prior);

// Data-dependent constants bounding the hindsight MLE, and the two-sided
// comparison of log K^theta* with S'V^-1 S / 2.
struct BoundReport {
  double l_c = 0.0;            // max ||c_i||
  double l_lambda = 0.0;       // lambda_max / lambda_min of V_n
  double vinv_s_norm = 0.0;    // ||V^-1 S||
  bool premise_holds = false;  // vinv_s_norm <= 1 / (3 l_c l_lambda)
  double mle_norm = 0.0;
  double bound = 0.0;          // 3 l_lambda vinv_s_norm
  double sandwich_lo = 0.0;    // exp(-C ||V^-1 S||), C = 3 l_c l_lambda
  double sandwich_hi = 0.0;
  double capital_ratio = 0.0;  // log K^theta* / (S'V^-1 S / 2)
  std::optional<bool> sandwich_holds;  // empty when not applicable
};

BoundReport small_mle_bound(std::span<const Round> rounds, const GameState& state,
                            const MleResult& mle_result);

// S'V^-1 S / log det V; empty until log det V > 0.
std::optional<double> theorem2_ratio(const Diagnostics& diag);

}  // namespace skeptic
