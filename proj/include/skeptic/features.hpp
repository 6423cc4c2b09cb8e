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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "skeptic/game.hpp"

namespace skeptic {

// Side-information builders.  The forecast-logit coordinate carries the
// raw coefficient beta - 1, so beta = 1 (full trust in Forecaster) is the
// model origin.
struct Constant {};
struct ForecastLogit {};
struct LagOutcome {
  int lag = 1;
};
struct ExogenousColumn {
  std::string name;
};
using FeatureBuilder = std::variant<Constant, ForecastLogit, LagOutcome, ExogenousColumn>;

struct FeatureSpec {
  std::vector<FeatureBuilder> builders;

  int dimension() const { return static_cast<int>(builders.size()); }
  // Index of the ForecastLogit coordinate, if present (first occurrence).
  std::optional<int> logit_coordinate() const;
  bool uses_exogenous() const;
};

// The three standard presets:
//   strategy-1: [const]
//   strategy-2: [const, logit]
//   strategy-3: [const, logit, lag:1]
FeatureSpec strategy_preset(std::string_view name);

// Comma-separated textual form, e.g. "const,logit,lag:1,exo:temp".
FeatureSpec parse_feature_spec(std::string_view text);
std::string to_string(const FeatureSpec& spec);

using ExogenousRow = std::map<std::string, double>;

// Builds c_n from the rounds already played, the current forecast, and
// optional named exogenous values.  A lagged outcome that reaches before
// the first round reads as 0.
Eigen::VectorXd build_features(const FeatureSpec& spec, std::span<const Round> history,
                               double p, const ExogenousRow* exo = nullptr);

}  // namespace skeptic
