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

#include <limits>
#include <optional>

#include <Eigen/Dense>

namespace skeptic {

// One step of the binary forecasting game: the announced probability, the
// disclosed side-information vector, and the realized outcome.
struct Round {
  double p = 0.0;       // forecast, in (0, 1)
  Eigen::VectorXd c;    // side information, fixed dimension within a game
  int x = 0;            // outcome, 0 or 1
};

// Throws std::invalid_argument if the round violates its invariants.
void validate_round(const Round& round);

// Running bookkeeping of one game.  Capital is tracked in log space so
// that 1e4+ rounds of multiplicative growth neither overflow nor
// underflow.
struct GameState {
  long n = 0;
  double log_capital = 0.0;  // log K_n
  Eigen::VectorXd drift;     // S_n = sum c_i (x_i - p_i)
  Eigen::MatrixXd info;      // V_n = sum c_i c_i' p_i (1 - p_i)

  int dimension() const { return static_cast<int>(drift.size()); }
};

// Spectral summary of (S_n, V_n).  When V_n is numerically singular the
// state is flagged degenerate instead of erroring: with d > 1 the first
// rounds of every game have rank-deficient V_n.
struct Diagnostics {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  Eigen::VectorXd vinv_s;  // V^-1 S, empty when degenerate
  double svs = std::numeric_limits<double>::quiet_NaN();  // S' V^-1 S
  double logdet_v = -std::numeric_limits<double>::infinity();
  std::optional<double> ratio;  // svs / log det V, defined once log det V > 0
  bool degenerate = true;
};

// Fresh state with K_0 = 1, S_0 = 0, V_0 = 0.  Rejects dimension < 1.
GameState init_state(int dimension);

// Whether the per-round factor 1 + nu (x - p) stays positive for both
// outcomes, i.e. nu lies strictly inside (-1/(1-p), 1/p).
bool admissible(double nu, double p);

// Applies one protocol step in place.  Throws std::domain_error when the
// bet could drive capital to zero or below (collateral duty) and
// std::invalid_argument on malformed input.
void play_round(GameState& state, const Round& round, double nu);

// Eigen-quantities are recomputed on demand; d stays small, so the O(d^3)
// solve per query is negligible.
Diagnostics diagnostics(const GameState& state);

}  // namespace skeptic
