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

#include <cstddef>
#include <span>
#include <vector>

#include "idv/conditions.hpp"
#include "idv/core.hpp"
#include "idv/payments.hpp"

namespace idv {

/// Ex-post IC-IR over the whole grid: for every profile, agent and own-grid
/// deviation. Agents in `excluded` receive no value from any outcome.
/// Witness: agent, profile (truth), upper (deviation profile), own = {true
/// index, reported index} and slack = truthful minus deviating utility; an IR
/// failure has own = {k} and slack = truthful utility.
CheckReport check_ex_post_ic_ir(const Instance& instance, const SocialChoiceFunction& f,
                                const PaymentTable& payments,
                                std::span<const int> excluded = {});

struct RatioResult {
  double ratio = 1.0;
  std::size_t profile = 0;  // first profile attaining the minimum
};

/// min over profiles of expected welfare / optimal welfare (0/0 counts as 1).
RatioResult approximation_ratio(const Instance& instance, const SocialChoiceFunction& f);

struct KeyLemmaMargin {
  double lhs = 0.0;  // E_A v(s_i, s_A, 0_B), A uniform over subsets of [n] \ {i}
  double rhs = 0.0;  // v(s) / 2
};

/// Refuses n > 20.
KeyLemmaMargin key_lemma_margin(const SignalGrid& grid, const GridFunction& fn,
                                std::span<const int> profile, int agent);

/// Uses v_agent(outcome; .) as the function.
KeyLemmaMargin key_lemma_margin(const Instance& instance, int agent, int outcome,
                                std::span<const int> profile);

struct MaxMinResult {
  double value = 0.0;
  std::size_t feasible = 0;  // distinct payoff rows of f-single-crossing f
  std::vector<double> mixture;
  /// payoff[r][profile] = welfare ratio of the r-th feasible f.
  std::vector<std::vector<double>> payoff;
};

struct MaxMinOptions {
  std::size_t max_rows = 200'000;
  std::size_t max_axis = 10;
  int max_outcomes = 6;
};

/// Best worst-case welfare ratio over mixtures of deterministic
/// f-single-crossing choice functions. Requires decomposable valuations.
MaxMinResult fsc_maxmin_oracle(const Instance& instance, const MaxMinOptions& options = {});

/// The same max-min over an explicit set of payoff rows.
double maxmin_value(const std::vector<std::vector<double>>& payoff);

}  // namespace idv
