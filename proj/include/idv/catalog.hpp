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

// Built-in instances. Agents and projects are 0-based here: "agent 1" of the
// textbook examples is agent 0, and "project 1" of the running example is
// project 0.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idv/core.hpp"

namespace idv::catalog {

/// Two agents, three projects, k = 1.
///   agent 0: v({0}) = 3 s_1,  v({1}) = s_0 / 2 + s_1,  v({2}) = 2 s_0
///   agent 1: v({0}) = s_1,    v({1}) = s_0 + s_1 / 2,  v({2}) = 0
Instance running_example(std::vector<double> s0 = {0.0, 1.0, 5.0 / 3.0, 2.0, 3.0, 4.0},
                         std::vector<double> s1 = {1.0});

/// Three agents, two projects, grid {0, 1, 2}^3. Agent 0 is linear in its own
/// signal, agent 1 decomposable, agent 2 neither.
Instance mixed_decomposability();

/// Single-item auction as public projects: v_0 = 1 + s_0, v_1 = H s_0; agent
/// 1 has no signal (grid {0}).
Instance deterministic_impossibility(double H = 100.0);

/// Single-item auction on {0, 1}^n with v_i = prod_{j != i} s_j + eps s_i
/// (the empty product is 1).
Instance no_sos_lower_bound(int n = 3, double eps = 0.01);

/// n agents, projects 0..n, grid {0, 1}^n, with s_{n} read as s_0:
///   v_i(0) = eps s_i + 1
///   v_i(i+1) = eps / (i + 2) s_i + H^(i+1) s_{i+1}
///   v_i(j) = eps / (j + 1) s_i otherwise.
Instance projects_lower_bound(int n = 2, double H = 100.0, double eps = 0.01);

/// Two agents, two projects, grid {0, 1/2, 1}^2, separable:
///   agent 0: h({0}) = s_0, g({1}) = s_1;  agent 1: h({1}) = s_1, g({0}) = s_0.
Instance cross_sos();

enum class RandomKind { kDecomposable, kSeparableSos, kLinear };

RandomKind parse_kind(const std::string& name);

/// Seeded generator. Bounds: 1 <= n <= 8, 1 <= k <= m <= 5, 2 <= grid <= 4.
Instance random_instance(RandomKind kind, int n, int m, int k, int grid_size,
                         std::uint64_t seed);

std::vector<std::string> names();

using Params = std::map<std::string, double>;

/// Builds a named instance; throws DomainError on an unknown name or bad
/// parameters.
Instance build(const std::string& name, const Params& params = {});

}  // namespace idv::catalog
