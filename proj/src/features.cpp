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

#include "skeptic/features.hpp"

#include <charconv>
#include <stdexcept>

#include "skeptic/numeric.hpp"

namespace skeptic {

std::optional<int> FeatureSpec::logit_coordinate() const {
  for (std::size_t i = 0; i < builders.size(); ++i) {
    if (std::holds_alternative<ForecastLogit>(builders[i])) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool FeatureSpec::uses_exogenous() const {
  for (const auto& b : builders) {
    if (std::holds_alternative<ExogenousColumn>(b)) return true;
  }
  return false;
}

FeatureSpec strategy_preset(std::string_view name) {
  if (name == "strategy-1") return {{Constant{}}};
  if (name == "strategy-2") return {{Constant{}, ForecastLogit{}}};
  if (name == "strategy-3") return {{Constant{}, ForecastLogit{}, LagOutcome{1}}};
  throw std::invalid_argument("unknown strategy preset: " + std::string(name));
}

FeatureSpec parse_feature_spec(std::string_view text) {
  FeatureSpec spec;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view token = text.substr(0, comma);
    text = (comma == std::string_view::npos) ? std::string_view{} : text.substr(comma + 1);
    if (token == "const") {
      spec.builders.emplace_back(Constant{});
    } else if (token == "logit") {
      spec.builders.emplace_back(ForecastLogit{});
    } else if (token.starts_with("lag:")) {
      int lag = 0;
      const auto body = token.substr(4);
      const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), lag);
      if (ec != std::errc{} || ptr != body.data() + body.size() || lag < 1) {
        throw std::invalid_argument("feature spec: bad lag in '" + std::string(token) + "'");
      }
      spec.builders.emplace_back(LagOutcome{lag});
    } else if (token.starts_with("exo:") && token.size() > 4) {
      spec.builders.emplace_back(ExogenousColumn{std::string(token.substr(4))});
    } else {
      throw std::invalid_argument("feature spec: unknown token '" + std::string(token) + "'");
    }
  }
  if (spec.builders.empty()) throw std::invalid_argument("feature spec: empty");
  return spec;
}

std::string to_string(const FeatureSpec& spec) {
  std::string out;
  for (const auto& b : spec.builders) {
    if (!out.empty()) out += ',';
    std::visit(
        [&out](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Constant>) {
            out += "const";
          } else if constexpr (std::is_same_v<T, ForecastLogit>) {
            out += "logit";
          } else if constexpr (std::is_same_v<T, LagOutcome>) {
            out += "lag:" + std::to_string(v.lag);
          } else {
            out += "exo:" + v.name;
          }
        },
        b);
  }
  return out;
}

Eigen::VectorXd build_features(const FeatureSpec& spec, std::span<const Round> history,
                               double p, const ExogenousRow* exo) {
  if (spec.builders.empty()) throw std::invalid_argument("build_features: empty spec");
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("build_features: forecast must lie in (0, 1)");
  }
  Eigen::VectorXd c(spec.dimension());
  for (int i = 0; i < spec.dimension(); ++i) {
    c[i] = std::visit(
        [&](const auto& b) -> double {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Constant>) {
            return 1.0;
          } else if constexpr (std::is_same_v<T, ForecastLogit>) {
            return logit(p);
          } else if constexpr (std::is_same_v<T, LagOutcome>) {
            const auto idx = static_cast<long>(history.size()) - b.lag;
            return idx >= 0 ? static_cast<double>(history[idx].x) : 0.0;
          } else {
            if (exo == nullptr) {
              throw std::invalid_argument("build_features: no exogenous data for column '" +
                                          b.name + "'");
            }
            const auto it = exo->find(b.name);
            if (it == exo->end()) {
              throw std::invalid_argument("build_features: missing exogenous column '" + b.name +
                                          "'");
            }
            return it->second;
          }
        },
        spec.builders[i]);
  }
  return c;
}

}  // namespace skeptic
