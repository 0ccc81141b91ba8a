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

// Shared fixtures for the unit, property and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idv/catalog.hpp"
#include "idv/cli.hpp"
#include "idv/core.hpp"
#include "idv/mechanisms.hpp"

namespace idv::test {

inline Instance linear_instance(std::vector<std::vector<double>> grid, int m, int k,
                                std::vector<std::vector<std::vector<double>>> coeffs) {
  std::vector<ValuationSpec> vals;
  for (auto& c : coeffs) vals.emplace_back(LinearValuation{std::move(c)});
  return Instance(SignalGrid(std::move(grid)), OutcomeSet(m, k), std::move(vals));
}

/// Two agents, outcomes {a} = {0} and {b} = {1}. Welfare picks b at s_0 = 0
/// and a at s_0 = 1, while agent 0's own slope prefers b.
inline Instance inverted_slopes() {
  return linear_instance({{0.0, 1.0}, {0.0}}, 2, 1,
                         {{{0, 0, 0}, {0, 0, 0}, {0, 2, 0}},
                          {{0, 0, 0}, {0, 4, 0}, {1, 0, 0}}});
}

/// One agent on {0.4, 0.6}: v(a) = 1, v(b) = 2s, where a = {0}, b = {1}.
inline Instance two_outcome_line() {
  return linear_instance({{0.4, 0.6}}, 2, 1, {{{0, 0}, {1, 0}, {0, 2}}});
}

/// Decomposable instance whose h columns all rank the outcomes the same way:
/// each (agent, s_-i) column of h is sorted ascending by outcome index.
inline Instance aligned_decomposable(int n, int m, int k, int grid, std::uint64_t seed) {
  Instance base = catalog::random_instance(catalog::RandomKind::kDecomposable, n, m, k, grid, seed);
  std::vector<ValuationSpec> vals;
  for (int i = 0; i < n; ++i) {
    auto v = std::get<DecomposableValuation>(base.valuation(i));
    for (std::size_t o = 0; o < v.h[0].size(); ++o) {
      std::vector<double> col;
      for (const auto& row : v.h) col.push_back(row[o]);
      std::sort(col.begin(), col.end());
      for (std::size_t a = 0; a < col.size(); ++a) v.h[a][o] = col[a];
    }
    for (auto& row : v.g) {
      for (double& x : row) x = std::abs(x);
    }
    for (double& x : v.g[0]) x = 0.0;
    vals.emplace_back(std::move(v));
  }
  return Instance(base.grid(), base.outcomes(), std::move(vals));
}

/// Deterministic f whose outcome index is a non-decreasing function of the
/// sum of grid indices. Satisfies f-single-crossing on aligned instances.
inline SocialChoiceFunction index_threshold_scf(const Instance& inst, std::mt19937_64& rng) {
  const auto& grid = inst.grid();
  int top = 0;
  for (int i = 0; i < grid.agents(); ++i) top += grid.size(i) - 1;
  std::vector<int> level(static_cast<std::size_t>(top) + 1);
  std::uniform_int_distribution<int> pick(0, inst.outcomes().size() - 1);
  for (int& l : level) l = pick(rng);
  std::sort(level.begin(), level.end());
  SocialChoiceFunction f(grid.profile_count(), inst.outcomes().size());
  for (std::size_t p = 0; p < grid.profile_count(); ++p) {
    const auto prof = grid.unflat(p);
    const int sum = std::accumulate(prof.begin(), prof.end(), 0);
    f.set_point(p, level[static_cast<std::size_t>(sum)]);
  }
  return f;
}

/// Randomized counterpart: mixes two index-threshold rules with a weight
/// that is fixed across profiles, so each marginal shift is first-order
/// stochastically monotone.
inline SocialChoiceFunction mixed_threshold_scf(const Instance& inst, std::mt19937_64& rng) {
  const auto f1 = index_threshold_scf(inst, rng);
  const auto f2 = index_threshold_scf(inst, rng);
  const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  SocialChoiceFunction f(f1.profile_count(), f1.outcome_count());
  for (std::size_t p = 0; p < f.profile_count(); ++p) {
    std::vector<double> weights(static_cast<std::size_t>(f.outcome_count()), 0.0);
    weights[static_cast<std::size_t>(f1.point(p))] += w;
    weights[static_cast<std::size_t>(f2.point(p))] += 1.0 - w;
    f.set(p, OutcomeDistribution(weights));
  }
  return f;
}

inline SocialChoiceFunction random_deterministic_scf(const Instance& inst, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, inst.outcomes().size() - 1);
  SocialChoiceFunction f(inst.grid().profile_count(), inst.outcomes().size());
  for (std::size_t p = 0; p < f.profile_count(); ++p) f.set_point(p, pick(rng));
  return f;
}

inline SocialChoiceFunction random_mixed_scf(const Instance& inst, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SocialChoiceFunction f(inst.grid().profile_count(), inst.outcomes().size());
  for (std::size_t p = 0; p < f.profile_count(); ++p) {
    std::vector<double> w(static_cast<std::size_t>(f.outcome_count()));
    double total = 0.0;
    for (double& x : w) total += (x = u(rng));
    for (double& x : w) x /= total;
    f.set(p, OutcomeDistribution(w));
  }
  return f;
}

/// The f mix used by the characterization suites, indexed by `variant`.
inline SocialChoiceFunction suite_scf(const Instance& inst, int variant, std::mt19937_64& rng) {
  switch (variant % 6) {
    case 0:
      return SocialChoiceFunction::constant(
          inst.grid().profile_count(),
          OutcomeDistribution::point_mass(inst.outcomes().size(),
                                          static_cast<int>(rng() % static_cast<std::uint64_t>(inst.outcomes().size()))));
    case 1:
      return welfare_max_scf(inst);
    case 2:
      return random_deterministic_scf(inst, rng);
    case 3:
      return random_mixed_scf(inst, rng);
    case 4:
      return index_threshold_scf(inst, rng);
    default:
      return mixed_threshold_scf(inst, rng);
  }
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

/// Scratch directory unique to the running test binary.
inline std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("idvmech_test_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::string write_scratch(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

}  // namespace idv::test
