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

#include "skeptic/sim.hpp"

#include <stdexcept>
#include <string>

#include "skeptic/rng.hpp"

namespace skeptic {

namespace {

void validate_forecasts(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("scenario: forecast series must be non-empty");
  for (double p : values) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::invalid_argument("scenario: forecasts must lie in (0, 1)");
    }
  }
}

void validate(const Scenario& s) {
  if (s.n < 1) throw std::invalid_argument("scenario: n must be >= 1");
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForecast>) {
          validate_forecasts({f.p});
        } else if constexpr (std::is_same_v<T, Alternating>) {
          validate_forecasts(f.values);
        } else {
          validate_forecasts(f.series);
        }
      },
      s.forecaster);
  std::visit(
      [](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          if (!(r.q >= 0.0 && r.q <= 1.0)) {
            throw std::invalid_argument("scenario: success probability must lie in [0, 1]");
          }
        } else if constexpr (std::is_same_v<T, MarkovChain>) {
          for (double v : {r.p11, r.p10, r.initial}) {
            if (!(v >= 0.0 && v <= 1.0)) {
              throw std::invalid_argument("scenario: transition probabilities must lie in [0, 1]");
            }
          }
        }
      },
      s.reality);
}

double forecast_at(const ForecasterModel& model, long i) {
  return std::visit(
      [i](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForecast>) {
          return f.p;
        } else if constexpr (std::is_same_v<T, Alternating>) {
          return f.values[static_cast<std::size_t>(i) % f.values.size()];
        } else {
          return f.series[static_cast<std::size_t>(i) % f.series.size()];
        }
      },
      model);
}

}  // namespace

std::vector<Observation> generate(const Scenario& scenario) {
  validate(scenario);
  Rng rng(scenario.seed);
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(scenario.n));

  int markov_state = 0;
  if (const auto* mc = std::get_if<MarkovChain>(&scenario.reality)) {
    markov_state = rng.bernoulli(mc->initial) ? 1 : 0;
  }

  for (long i = 0; i < scenario.n; ++i) {
    const double p = forecast_at(scenario.forecaster, i);
    const int x = std::visit(
        [&](const auto& r) -> int {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, Bernoulli>) {
            return rng.bernoulli(r.q) ? 1 : 0;
          } else if constexpr (std::is_same_v<T, MarkovChain>) {
            markov_state = rng.bernoulli(markov_state == 1 ? r.p11 : r.p10) ? 1 : 0;
            return markov_state;
          } else {
            return rng.bernoulli(p) ? 1 : 0;
          }
        },
        scenario.reality);
    out.push_back({p, x});
  }
  return out;
}

Scenario scenario_preset(std::string_view name) {
  if (name == "case-1") return {Alternating{{0.4, 0.6}}, Bernoulli{0.7}, 0, 0};
  if (name == "case-2") return {Alternating{{0.4, 0.6}}, Bernoulli{0.5}, 0, 0};
  if (name == "case-3") return {ConstantForecast{0.5}, MarkovChain{}, 0, 0};
  if (name == "honest") return {ConstantForecast{0.5}, Honest{}, 0, 0};
  throw std::invalid_argument("unknown scenario preset: " + std::string(name));
}

}  // namespace skeptic
