// Copyright 2026 The idvmech Authors
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

#include <vector>

namespace idv {

struct GameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;     // maximizer's mixture over rows
  std::vector<double> column_strategy;  // minimizer's best reply mixture
};

/// Value of the zero-sum game max_x min_j (x^T A)_j for a dense payoff
/// matrix (rows = maximizer's pure strategies). Solved as a linear program
/// with a revised simplex under Bland's rule.
GameSolution solve_matrix_game(const std::vector<std::vector<double>>& payoff);

}  // namespace idv
