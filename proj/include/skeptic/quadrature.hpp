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

#include <Eigen/Dense>

namespace skeptic {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // ascending, on [-1, 1]
  Eigen::VectorXd weights;  // sum to 2
};

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
// iteration on the Legendre polynomial.
QuadratureRule gauss_legendre(int n);

}  // namespace skeptic
