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

// Implementability conditions for social choice functions under
// interdependent values.
//
// Every checker works agent by agent on "lines": the profiles that share a
// fixed s_-i and differ only in agent i's grid signal. Agents with a single
// grid point contribute no lines. On failure the report carries the first
// violation in canonical order (agent, then s_-i, then own signals).

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "idv/core.hpp"

namespace idv {

/// Single-crossing for single-dimensional instances (auction encoding: the
/// project with id i stands for "agent i wins"). Witness: agent = i,
/// other_agent = j, slack = dv_i/ds_i - dv_j/ds_i.
CheckReport check_single_crossing(const Instance& instance);

/// Strong single-crossing against the welfare-maximizing choice function.
/// Throws DomainError when some valuation is not decomposable.
CheckReport check_strong_single_crossing(const Instance& instance);

/// <dv_i/ds_i(s), f(s'_i, s_-i)> >= <dv_i/ds_i(s), f(s)> for every s_i < s'_i.
/// Throws DomainError when some valuation is not decomposable.
CheckReport check_f_single_crossing(const Instance& instance,
                                    const SocialChoiceFunction& f);

/// Integral form with piecewise-linear values and f held at the left end of
/// each grid step. Holds for any valuation class.
CheckReport check_weak_f_single_crossing(const Instance& instance,
                                         const SocialChoiceFunction& f);

CheckReport check_wmon(const Instance& instance, const SocialChoiceFunction& f);

/// Negative-cycle search (Bellman-Ford) on each line's deviation graph. The
/// witness lists the cycle's own-signal indices in traversal order.
CheckReport check_cmon(const Instance& instance, const SocialChoiceFunction& f);

struct Decomposition {
  bool decomposable = false;
  std::vector<double> vhat;  // per own grid point
  std::vector<double> h;     // per outcome, >= 0
  std::vector<double> g;     // per outcome
  /// On rejection: own = {base, k, reference}, outcomes = {a, b} spanning a
  /// non-zero 2x2 minor of the difference vectors (or a sign conflict in h
  /// when own has two entries).
  std::optional<Witness> witness;
};

/// Rank-one test of the value curve s_i -> v_i(s_i, s_-i) at one s_-i.
Decomposition detect_decomposable(const Instance& instance, int agent,
                                  std::size_t others_index);

/// detect_decomposable over every s_-i of one agent (or of all agents).
CheckReport check_decomposable(const Instance& instance, int agent);
CheckReport check_decomposable(const Instance& instance);

struct SosOptions {
  /// Exhaustive when the grid has at most this many profiles.
  std::size_t exhaustive_limit = 100'000;
  std::size_t samples = 10'000;
  std::uint64_t seed = 0x5e5a'51e5ULL;
};

using GridFunction = std::function<double(std::span<const int>)>;

/// Submodularity over signals of a function on `grid`. Witness: profile = s,
/// upper = s', agent = the raised coordinate i.
CheckReport check_sos(const SignalGrid& grid, const GridFunction& fn,
                      const SosOptions& options = {});

CheckReport check_sos(const Instance& instance, int agent, int outcome,
                      const SosOptions& options = {});

/// h_i and g_-i weakly increasing, g_-i SOS. Throws DomainError unless every
/// valuation uses the separable-SOS variant.
CheckReport check_separable_sos(const Instance& instance);

}  // namespace idv
