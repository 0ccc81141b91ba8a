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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "idv/core.hpp"
#include "idv/payments.hpp"

namespace idv {

/// Welfare maximization on the grid. Ties within kTol go to the outcome with
/// the largest welfare slope along the all-signals-up direction (so regions
/// are closed on the left, as in threshold pricing), then to the lowest
/// canonical index.
SocialChoiceFunction welfare_max_scf(const Instance& instance);

/// Optimal welfare at every profile.
std::vector<double> optimal_welfare(const Instance& instance);

/// Result of a mechanism run. `scf` and `payments` cover every grid profile
/// (the reports). Excluded agents get no value and pay 0.
struct MechanismResult {
  SocialChoiceFunction scf;
  PaymentTable payments;
  std::vector<int> excluded;
  std::optional<std::uint64_t> seed;
};

struct MechanismRun {
  int outcome = 0;
  std::vector<double> payments;
};

/// A-exclusion-VCG at one report profile. Requires separable-SOS valuations
/// and k = 1 (apply k_to_one_reduction first).
MechanismRun a_exclusion_vcg(const Instance& instance,
                             std::span<const int> excluded,
                             std::span<const int> reports);

/// A-exclusion-VCG tabulated over every report profile.
MechanismResult a_exclusion_vcg_table(const Instance& instance,
                                      std::span<const int> excluded);

/// Each agent lands in A independently with probability 1/2.
std::vector<int> sample_excluded(int agents, std::uint64_t seed);

/// Random-Sampling-VCG, sampled mode: draws A from `seed` and tabulates the
/// A-exclusion-VCG mechanism.
MechanismResult random_sampling_vcg(const Instance& instance,
                                    std::uint64_t seed);

struct ExpectedWelfare {
  std::size_t profile = 0;
  double expected = 0.0;  // average over all 2^n excluded sets
  double optimum = 0.0;
};

/// Random-Sampling-VCG, exact mode: enumerates every A. Refuses n > 20.
std::vector<ExpectedWelfare> random_sampling_vcg_exact(const Instance& instance);

/// Welfare realized by A-exclusion-VCG under truthful reports: the sum of
/// non-excluded agents' values for the chosen outcome.
double exclusion_welfare(const Instance& instance, const ValueTable& values,
                         std::span<const int> excluded, std::size_t profile);

/// Single-item auction: win_value[i][profile] is v_i(s) for winning.
struct SingleItemAuction {
  SignalGrid grid;
  std::vector<std::vector<double>> win_value;
};

/// m = n projects, k = 1; agent i values project i at v_i(s) and nothing
/// else.
Instance auction_to_public_projects(const SingleItemAuction& auction);

/// One meta-project per outcome of the original outcome set (the empty set
/// included); the new empty outcome keeps the original empty outcome's
/// values.
Instance k_to_one_reduction(const Instance& instance);

/// Maps a reduced outcome index back to the original outcome index.
int meta_outcome_origin(int reduced_outcome);

}  // namespace idv
