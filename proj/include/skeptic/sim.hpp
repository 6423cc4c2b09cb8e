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
#include <string_view>
#include <variant>
#include <vector>

namespace skeptic {

// Reality's move generators.
struct Bernoulli {
  double q = 0.5;  // success probability
};
struct MarkovChain {
  double p11 = 0.7;      // P(x_n = 1 | x_{n-1} = 1)
  double p10 = 0.3;      // P(x_n = 1 | x_{n-1} = 0)
  double initial = 0.5;  // P(start state = 1)
};
struct Honest {};  // x_n ~ Bernoulli(p_n)
using RealityModel = std::variant<Bernoulli, MarkovChain, Honest>;

// Forecaster's move generators.
struct Alternating {
  std::vector<double> values;  // cycled
};
struct ConstantForecast {
  double p = 0.5;
};
struct FromData {
  std::vector<double> series;  // cycled when shorter than n
};
using ForecasterModel = std::variant<Alternating, ConstantForecast, FromData>;

struct Scenario {
  ForecasterModel forecaster;
  RealityModel reality;
  long n = 0;
  std::uint64_t seed = 0;
};

// A forecast/outcome pair; side information is attached later by the
// feature builders.
struct Observation {
  double p = 0.0;
  int x = 0;
};

// Deterministic given the seed.
std::vector<Observation> generate(const Scenario& scenario);

// case-1: Bernoulli(0.7) vs forecasts alternating 0.4, 0.6
// case-2: Bernoulli(0.5) vs forecasts alternating 0.4, 0.6
// case-3: constant 0.5 forecast vs a Markov chain (default p11 = 0.7,
//         p10 = 0.3; the chain is fully configurable)
// honest: constant 0.5 forecast, outcomes drawn from the forecast
// n and seed are left for the caller to fill in.
Scenario scenario_preset(std::string_view name);

}  // namespace skeptic
