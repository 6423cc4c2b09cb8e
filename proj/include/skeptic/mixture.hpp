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

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "skeptic/features.hpp"
#include "skeptic/game.hpp"

namespace skeptic {

// Uniform product prior over a box, discretized by a tensor-product
// Gauss-Legendre grid.  The mixture integrand e^{log K^theta} is smooth
// and log-concave in theta, so moderate-order quadrature is accurate.
struct PriorSpec {
  struct Interval {
    double lo = 0.0;
    double hi = 0.0;
  };
  std::vector<Interval> box;
  int nodes_per_dim = 0;  // 0 selects the per-dimension default

  int dimension() const { return static_cast<int>(box.size()); }
  // The weak-forcing theorems need a prior putting mass on a neighborhood
  // of the origin; priors without this property are still playable but
  // carry no guarantee.
  bool supports_origin() const;
  double log_volume() const;
};

PriorSpec uniform_prior(std::vector<PriorSpec::Interval> box, int nodes_per_dim = 0);

// Prior for a feature spec in the beta parameterization: every coordinate
// gets `coef`, except a ForecastLogit coordinate which gets the `beta`
// interval translated by -1 (the stored coefficient is beta - 1).
PriorSpec strategy_prior(const FeatureSpec& spec, PriorSpec::Interval coef = {0.0, 1.0},
                         PriorSpec::Interval beta = {0.0, 1.0}, int nodes_per_dim = 0);

// 65 nodes per dimension up to d = 2, 33 at d = 3, shrinking further so
// the tensor grid stays below ~4e4 nodes.
int default_nodes_per_dim(int dimension);

// Capital process of the Bayesian strategy, K^pi = int K^theta pi(theta)
// dtheta, kept as per-node log-capital accumulators over the quadrature
// grid.  All aggregation goes through log-sum-exp: per-node capital spans
// hundreds of e-folds over long games.
//
// A Mixture is a value: copy freely, update sequentially.  Lookups are
// memoized per distinct (p, c) pair because real forecast data is heavily
// discretized; the cache makes one instance unsafe for concurrent calls.
class Mixture {
 public:
  Mixture(const PriorSpec& prior, int dimension);

  int dimension() const { return static_cast<int>(nodes_.cols()); }
  long rounds() const { return n_; }
  std::size_t node_count() const { return static_cast<std::size_t>(nodes_.rows()); }
  const PriorSpec& prior() const { return prior_; }

  // log K^pi_n = logsumexp_j(log weight_j + log K^{theta_j}_n).
  double log_capital() const;

  // Capital-weighted average of the per-node Kelly ratios; the exact bet
  // that makes K^pi itself a capital process.  A convex combination of
  // admissible ratios, hence admissible.
  double bet_ratio(double p, const Eigen::VectorXd& c) const;

  // Absorbs one round into every node's accumulator.
  void update(const Round& round);

  const Eigen::MatrixXd& nodes() const { return nodes_; }          // N x d
  const Eigen::VectorXd& log_weights() const { return log_weight_; }
  const Eigen::VectorXd& node_log_capital() const { return acc_; }

  static constexpr std::size_t kMaxNodes = 1'000'000;
  static constexpr std::size_t kMaxCacheEntries = 512;

 private:
  struct NodeEval {
    Eigen::VectorXd y;    // theta_j'c per node
    Eigen::VectorXd psi;  // log(1 + p(e^y - 1)) per node
    Eigen::VectorXd nu;   // Kelly ratio per node
  };
  struct CacheKey {
    double p;
    Eigen::VectorXd c;
    bool operator==(const CacheKey& o) const {
      return p == o.p && c.size() == o.c.size() && c == o.c;
    }
  };
  struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const;
  };

  NodeEval compute_eval(double p, const Eigen::VectorXd& c) const;
  // Cached evaluation; falls back to `scratch` once the cache is full
  // (continuous-valued forecasts would otherwise grow it without bound).
  const NodeEval& eval_for(double p, const Eigen::VectorXd& c, NodeEval& scratch) const;

  PriorSpec prior_;
  Eigen::MatrixXd nodes_;
  Eigen::VectorXd log_weight_;
  Eigen::VectorXd acc_;
  long n_ = 0;
  mutable std::unordered_map<CacheKey, NodeEval, CacheKeyHash> cache_;
};

}  // namespace skeptic
