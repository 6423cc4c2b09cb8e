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

#include "skeptic/hindsight.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "skeptic/numeric.hpp"

namespace skeptic {

namespace {

// Accepting a Newton step requires the objective not to decrease; early
// iterates overshoot when |theta'c| is large, so halve until it holds.
constexpr int kMaxHalvings = 60;
// A converged interior maximum also has a vanishing Newton step.  On
// separated data the gradient tends to zero while the step stays O(1)
// (the Hessian decays at the same rate), which is the tell apart.
constexpr double kStepTol = 1e-8;
// Past this log-odds shift a predicted probability is indistinguishable
// from 0 or 1 in double precision; a "zero gradient" there carries no
// information about an interior maximum.
constexpr double kSaturationZ = 36.0;

Eigen::VectorXd outcome_target(std::span<const Round> rounds) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(rounds.front().c.size());
  for (const Round& r : rounds) t += r.c * static_cast<double>(r.x);
  return t;
}

double max_abs_log_odds(const Theta& theta, std::span<const Round> rounds) {
  double m = 0.0;
  for (const Round& r : rounds) m = std::max(m, std::abs(logit(r.p) + theta.dot(r.c)));
  return m;
}

}  // namespace

MleResult mle_for_target(std::span<const Round> rounds, const Eigen::VectorXd& target,
                         const Theta& init, const MleOptions& options) {
  if (rounds.empty()) throw std::invalid_argument("mle: empty round sequence");
  const auto d = rounds.front().c.size();
  if (target.size() != d || init.size() != d) {
    throw std::invalid_argument("mle: dimension mismatch");
  }

  MleResult result;
  Theta theta = init;
  PotentialEval eval = potential(theta, rounds);
  double objective = theta.dot(target) - eval.value;
  const double grad_scale = options.tol * (1.0 + target.norm());

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::VectorXd grad = target - eval.grad;
    result.grad_norm = grad.norm();
    result.iterations = iter;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(eval.hess);
    Eigen::VectorXd step = ldlt.solve(grad);
    const bool step_ok = ldlt.info() == Eigen::Success && step.allFinite();

    if (result.grad_norm <= grad_scale && step_ok &&
        step.norm() <= kStepTol * (1.0 + theta.norm())) {
      if (max_abs_log_odds(theta, rounds) >= kSaturationZ) {
        result.recession = theta.normalized();
        break;
      }
      result.converged = true;
      break;
    }
    if (theta.norm() > options.theta_max) {
      result.recession = theta.normalized();
      break;
    }
    if (!step_ok) {
      // Concave objective with unusable curvature: fall back to the
      // gradient direction so separated data keeps drifting outward.
      step = grad;
    }

    double t = 1.0;
    Theta candidate;
    PotentialEval cand_eval;
    double cand_objective = 0.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      candidate = theta + t * step;
      cand_eval = potential(candidate, rounds);
      cand_objective = candidate.dot(target) - cand_eval.value;
      // "Does not decrease" up to the roundoff floor of the two large
      // terms, which dwarfs the true gain once the gradient is small.
      const double slack =
          1e-12 * (1.0 + std::abs(candidate.dot(target)) + std::abs(cand_eval.value));
      if (std::isfinite(cand_objective) && cand_objective >= objective - slack) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no ascent left at this scale

    theta = candidate;
    eval = cand_eval;
    objective = cand_objective;
  }

  result.theta_star = theta;
  result.log_capital = objective;
  result.hess = eval.hess;
  result.grad_norm = (target - eval.grad).norm();
  if (!result.converged && !result.recession.has_value() && result.grad_norm <= grad_scale &&
      theta.norm() <= options.theta_max) {
    // Stalled line search at a tolerance-level gradient with bounded
    // iterates: treat as converged only if the step criterion also holds.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(eval.hess);
    const Eigen::VectorXd step = ldlt.solve(target - eval.grad);
    if (ldlt.info() == Eigen::Success && step.allFinite() &&
        step.norm() <= kStepTol * (1.0 + theta.norm()) &&
        max_abs_log_odds(theta, rounds) < kSaturationZ) {
      result.converged = true;
    }
  }
  return result;
}

MleResult mle(std::span<const Round> rounds, const Theta& init, const MleOptions& options) {
  if (rounds.empty()) throw std::invalid_argument("mle: empty round sequence");
  return mle_for_target(rounds, outcome_target(rounds), init, options);
}

MleResult mle(std::span<const Round> rounds, const MleOptions& options) {
  if (rounds.empty()) throw std::invalid_argument("mle: empty round sequence");
  return mle(rounds, Theta::Zero(rounds.front().c.size()), options);
}

LaplaceResult laplace_log_capital(const MleResult& mle_result, const PriorSpec& prior) {
  const auto d = mle_result.theta_star.size();
  if (prior.dimension() != d) throw std::invalid_argument("laplace: prior dimension mismatch");

  LaplaceResult out;
  out.in_support = true;
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& iv = prior.box[static_cast<std::size_t>(j)];
    if (!(iv.lo < mle_result.theta_star[j] && mle_result.theta_star[j] < iv.hi)) {
      out.in_support = false;
    }
  }

  Eigen::LLT<Eigen::MatrixXd> llt(mle_result.hess);
  if (llt.info() != Eigen::Success) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.in_support = false;
    return out;
  }
  const double half_logdet_h =
      Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
  out.value = mle_result.log_capital - prior.log_volume() +
              0.5 * d * std::log(2.0 * std::numbers::pi) - half_logdet_h;
  return out;
}

BoundReport small_mle_bound(std::span<const Round> rounds, const GameState& state,
                            const MleResult& mle_result) {
  const Diagnostics diag = diagnostics(state);
  if (diag.degenerate) {
    throw std::invalid_argument("small_mle_bound: V_n must be positive definite");
  }

  BoundReport report;
  for (const Round& r : rounds) report.l_c = std::max(report.l_c, r.c.norm());
  report.l_lambda = diag.lambda_max / diag.lambda_min;
  report.vinv_s_norm = diag.vinv_s.norm();
  report.premise_holds = report.vinv_s_norm <= 1.0 / (3.0 * report.l_c * report.l_lambda);
  report.mle_norm = mle_result.theta_star.norm();
  report.bound = 3.0 * report.l_lambda * report.vinv_s_norm;

  const double c_n = 3.0 * report.l_c * report.l_lambda;
  report.sandwich_lo = std::exp(-c_n * report.vinv_s_norm);
  report.sandwich_hi = std::exp(c_n * report.vinv_s_norm);
  const double half_svs = 0.5 * diag.svs;
  if (half_svs > 0.0) {
    report.capital_ratio = mle_result.log_capital / half_svs;
    if (report.premise_holds && mle_result.converged) {
      report.sandwich_holds = report.capital_ratio >= report.sandwich_lo * (1.0 - 1e-9) &&
                              report.capital_ratio <= report.sandwich_hi * (1.0 + 1e-9);
    }
  } else {
    report.capital_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::optional<double> theorem2_ratio(const Diagnostics& diag) {
  return diag.ratio;
}

}  // namespace skeptic
