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

#include "skeptic/mixture.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "skeptic/numeric.hpp"
#include "skeptic/quadrature.hpp"

namespace skeptic {

bool PriorSpec::supports_origin() const {
  for (const auto& iv : box) {
    if (!(iv.lo < 0.0 && 0.0 < iv.hi)) return false;
  }
  return !box.empty();
}

double PriorSpec::log_volume() const {
  double lv = 0.0;
  for (const auto& iv : box) lv += std::log(iv.hi - iv.lo);
  return lv;
}

PriorSpec uniform_prior(std::vector<PriorSpec::Interval> box, int nodes_per_dim) {
  for (const auto& iv : box) {
    if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw std::invalid_argument("prior: intervals must be finite with lo < hi");
    }
  }
  if (box.empty()) throw std::invalid_argument("prior: empty box");
  return {std::move(box), nodes_per_dim};
}

PriorSpec strategy_prior(const FeatureSpec& spec, PriorSpec::Interval coef,
                         PriorSpec::Interval beta, int nodes_per_dim) {
  std::vector<PriorSpec::Interval> box;
  box.reserve(spec.builders.size());
  for (const auto& b : spec.builders) {
    if (std::holds_alternative<ForecastLogit>(b)) {
      box.push_back({beta.lo - 1.0, beta.hi - 1.0});
    } else {
      box.push_back(coef);
    }
  }
  return uniform_prior(std::move(box), nodes_per_dim);
}

int default_nodes_per_dim(int dimension) {
  switch (dimension) {
    case 1:
    case 2:
      return 65;
    case 3:
      return 33;
    default: {
      // Largest odd order keeping the grid below ~4e4 nodes.
      int m = static_cast<int>(std::pow(4e4, 1.0 / dimension));
      if (m % 2 == 0) --m;
      return std::max(m, 3);
    }
  }
}

Mixture::Mixture(const PriorSpec& prior, int dimension) : prior_(prior) {
  if (prior.dimension() != dimension) {
    throw std::invalid_argument("mixture: prior dimension does not match the game");
  }
  const int m = prior.nodes_per_dim > 0 ? prior.nodes_per_dim : default_nodes_per_dim(dimension);
  if (m < 2) throw std::invalid_argument("mixture: nodes_per_dim must be >= 2");
  prior_.nodes_per_dim = m;

  std::size_t total = 1;
  for (int j = 0; j < dimension; ++j) {
    if (total > kMaxNodes / static_cast<std::size_t>(m)) {
      throw std::invalid_argument("mixture: node count exceeds cap");
    }
    total *= static_cast<std::size_t>(m);
  }

  const QuadratureRule rule = gauss_legendre(m);
  nodes_.resize(static_cast<Eigen::Index>(total), dimension);
  log_weight_.resize(static_cast<Eigen::Index>(total));
  // Scaled weight times uniform density: (w * half) / (hi - lo) = w / 2
  // per coordinate, so total mass is exactly the product of sum(w)/2 = 1.
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    double lw = 0.0;
    for (int j = 0; j < dimension; ++j) {
      const int k = static_cast<int>(rem % static_cast<std::size_t>(m));
      rem /= static_cast<std::size_t>(m);
      const auto& iv = prior_.box[static_cast<std::size_t>(j)];
      const double mid = 0.5 * (iv.lo + iv.hi);
      const double half = 0.5 * (iv.hi - iv.lo);
      nodes_(static_cast<Eigen::Index>(idx), j) = mid + half * rule.nodes[k];
      lw += std::log(rule.weights[k]) - std::log(2.0);
    }
    log_weight_[static_cast<Eigen::Index>(idx)] = lw;
  }
  acc_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(total));
}

std::size_t Mixture::CacheKeyHash::operator()(const CacheKey& k) const {
  // FNV-1a over the raw bit patterns.
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(std::bit_cast<std::uint64_t>(k.p));
  for (Eigen::Index i = 0; i < k.c.size(); ++i) {
    mix(std::bit_cast<std::uint64_t>(k.c[i]));
  }
  return static_cast<std::size_t>(h);
}

Mixture::NodeEval Mixture::compute_eval(double p, const Eigen::VectorXd& c) const {
  NodeEval ev;
  ev.y = nodes_ * c;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const Eigen::ArrayXd t = lp + ev.y.array();
  const Eigen::ArrayXd hi = t.max(lq);
  const Eigen::ArrayXd lo = t.min(lq);
  ev.psi = (hi + (lo - hi).exp().log1p()).matrix();

  const Eigen::ArrayXd z = logit(p) + ev.y.array();
  const Eigen::ArrayXd phat = (0.5 + 0.5 * (0.5 * z).tanh()).min(kMaxProb).max(kMinProb);
  ev.nu = ((phat - p) / (p * (1.0 - p))).matrix();
  return ev;
}

const Mixture::NodeEval& Mixture::eval_for(double p, const Eigen::VectorXd& c,
                                           NodeEval& scratch) const {
  CacheKey key{p, c};
  const auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  if (cache_.size() < kMaxCacheEntries) {
    return cache_.emplace(std::move(key), compute_eval(p, c)).first->second;
  }
  scratch = compute_eval(p, c);
  return scratch;
}

double Mixture::log_capital() const {
  return log_sum_exp(log_weight_ + acc_);
}

double Mixture::bet_ratio(double p, const Eigen::VectorXd& c) const {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("bet_ratio: forecast must lie in (0, 1)");
  if (c.size() != nodes_.cols()) {
    throw std::invalid_argument("bet_ratio: side-information dimension mismatch");
  }
  NodeEval scratch;
  const NodeEval& ev = eval_for(p, c, scratch);
  const Eigen::ArrayXd z = (log_weight_ + acc_).array();
  const Eigen::ArrayXd w = (z - z.maxCoeff()).exp();
  return (w * ev.nu.array()).sum() / w.sum();
}

void Mixture::update(const Round& round) {
  validate_round(round);
  if (round.c.size() != nodes_.cols()) {
    throw std::invalid_argument("mixture update: side-information dimension mismatch");
  }
  NodeEval scratch;
  const NodeEval& ev = eval_for(round.p, round.c, scratch);
  if (round.x == 1) {
    acc_ += ev.y - ev.psi;
  } else {
    acc_ -= ev.psi;
  }
  ++n_;
}

}  // namespace skeptic
