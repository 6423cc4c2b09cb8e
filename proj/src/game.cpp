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

#include "skeptic/game.hpp"

#include <cmath>
#include <stdexcept>

namespace skeptic {

namespace {
constexpr double kDegenerateRelTol = 1e-12;
}

void validate_round(const Round& round) {
  if (!(round.p > 0.0 && round.p < 1.0)) {
    throw std::invalid_argument("round: forecast must lie in (0, 1)");
  }
  if (round.x != 0 && round.x != 1) {
    throw std::invalid_argument("round: outcome must be 0 or 1");
  }
  if (round.c.size() == 0 || !round.c.allFinite()) {
    throw std::invalid_argument("round: side information must be finite and non-empty");
  }
}

GameState init_state(int dimension) {
  if (dimension < 1) throw std::invalid_argument("init_state: dimension must be >= 1");
  GameState state;
  state.drift = Eigen::VectorXd::Zero(dimension);
  state.info = Eigen::MatrixXd::Zero(dimension, dimension);
  return state;
}

bool admissible(double nu, double p) {
  return std::isfinite(nu) && nu < 1.0 / p && nu > -1.0 / (1.0 - p);
}

void play_round(GameState& state, const Round& round, double nu) {
  validate_round(round);
  if (round.c.size() != state.drift.size()) {
    throw std::invalid_argument("play_round: side-information dimension mismatch");
  }
  if (!admissible(nu, round.p)) {
    throw std::domain_error("play_round: inadmissible bet ratio (collateral duty)");
  }
  state.log_capital += std::log1p(nu * (round.x - round.p));
  state.drift += round.c * (round.x - round.p);
  state.info.noalias() += round.c * round.c.transpose() * (round.p * (1.0 - round.p));
  state.n += 1;
}

Diagnostics diagnostics(const GameState& state) {
  Diagnostics diag;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(state.info);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  diag.lambda_min = std::max(ev(0), 0.0);
  diag.lambda_max = ev(ev.size() - 1);
  diag.degenerate = !(ev(0) > kDegenerateRelTol * diag.lambda_max && diag.lambda_max > 0.0);
  if (diag.degenerate) return diag;

  const Eigen::VectorXd proj = es.eigenvectors().transpose() * state.drift;
  diag.vinv_s = es.eigenvectors() * (proj.array() / ev.array()).matrix();
  diag.svs = state.drift.dot(diag.vinv_s);
  diag.logdet_v = ev.array().log().sum();
  if (diag.logdet_v > 0.0) diag.ratio = diag.svs / diag.logdet_v;
  return diag;
}

}  // namespace skeptic
