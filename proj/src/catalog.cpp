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

#include "idv/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "idv/mechanisms.hpp"

namespace idv::catalog {
namespace {

using Rows = std::vector<std::vector<double>>;

SignalGrid binary_grid(int n) {
  return SignalGrid(std::vector<std::vector<double>>(static_cast<std::size_t>(n), {0.0, 1.0}));
}

// Uniform on [0, 1) from the top 53 bits, identical on every platform.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Exact multiples of 1/8 keep random instances readable and round-trip safe.
double eighths(double x) { return std::round(x * 8.0) / 8.0; }

double param(const Params& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

int int_param(const Params& params, const std::string& key, int fallback) {
  const double x = param(params, key, fallback);
  if (x != std::floor(x)) throw DomainError("catalog: parameter " + key + " must be an integer");
  return static_cast<int>(x);
}

}  // namespace

Instance running_example(std::vector<double> s0, std::vector<double> s1) {
  SignalGrid grid({std::move(s0), std::move(s1)});
  OutcomeSet outcomes(3, 1);
  // Rows: empty, {0}, {1}, {2}; columns: constant, s_0, s_1.
  LinearValuation a0{Rows{{0, 0, 0}, {0, 0, 3}, {0, 0.5, 1}, {0, 2, 0}}};
  LinearValuation a1{Rows{{0, 0, 0}, {0, 0, 1}, {0, 1, 0.5}, {0, 0, 0}}};
  return Instance(std::move(grid), std::move(outcomes), {a0, a1});
}

Instance mixed_decomposability() {
  const std::vector<double> pts{0.0, 1.0, 2.0};
  SignalGrid grid({pts, pts, pts});
  OutcomeSet outcomes(2, 1);
  const std::size_t P = grid.profile_count();
  const std::size_t others = grid.others_count(0);

  // Agent 0: v({0}) = s0 s1, v({1}) = s0 s1^2; vhat = s0, h = (0, s1, s1^2).
  DecomposableValuation a0;
  a0.vhat.resize(P);
  a0.vhat_slope = std::vector<double>(P, 1.0);
  a0.h.assign(3, std::vector<double>(others, 0.0));
  a0.g.assign(3, std::vector<double>(others, 0.0));
  // Agent 1: v({0}) = s0 + s1^2, v({1}) = s0 s1^2; vhat = s1^2, h = (0, 1, s0),
  // g = (0, s0, 0).
  DecomposableValuation a1;
  a1.vhat.resize(P);
  a1.vhat_slope = std::vector<double>(P);
  a1.h.assign(3, std::vector<double>(others, 0.0));
  a1.g.assign(3, std::vector<double>(others, 0.0));
  // Agent 2: v({0}) = s0 + s1 + s2, v({1}) = s0 s2^3.
  TabulatedValuation a2;
  a2.table.assign(P, std::vector<double>(3, 0.0));

  for (std::size_t p = 0; p < P; ++p) {
    const GridProfile q = grid.unflat(p);
    const auto s = grid.signals(q);
    a0.vhat[p] = s[0];
    a1.vhat[p] = s[1] * s[1];
    (*a1.vhat_slope)[p] = 2.0 * s[1];
    a2.table[p] = {0.0, s[0] + s[1] + s[2], s[0] * s[2] * s[2] * s[2]};
    const std::size_t o0 = grid.others_flat(0, q);
    a0.h[1][o0] = s[1];
    a0.h[2][o0] = s[1] * s[1];
    const std::size_t o1 = grid.others_flat(1, q);
    a1.h[1][o1] = 1.0;
    a1.h[2][o1] = s[0];
    a1.g[1][o1] = s[0];
  }
  return Instance(std::move(grid), std::move(outcomes), {a0, a1, a2});
}

Instance deterministic_impossibility(double H) {
  if (!(H > 0.0)) throw DomainError("deterministic_impossibility: H must be > 0");
  SingleItemAuction auction{SignalGrid({{0.0, 1.0}, {0.0}}), {}};
  std::vector<double> v0, v1;
  for (std::size_t p = 0; p < auction.grid.profile_count(); ++p) {
    const double s0 = auction.grid.signals(auction.grid.unflat(p))[0];
    v0.push_back(1.0 + s0);
    v1.push_back(H * s0);
  }
  auction.win_value = {v0, v1};
  return auction_to_public_projects(auction);
}

Instance no_sos_lower_bound(int n, double eps) {
  if (n < 1) throw DomainError("no_sos_lower_bound: n must be >= 1");
  if (n > 16) throw DomainError("no_sos_lower_bound: n must be <= 16");
  if (!(eps >= 0.0)) throw DomainError("no_sos_lower_bound: eps must be >= 0");
  SingleItemAuction auction{binary_grid(n), {}};
  auction.win_value.assign(static_cast<std::size_t>(n), {});
  for (std::size_t p = 0; p < auction.grid.profile_count(); ++p) {
    const auto s = auction.grid.signals(auction.grid.unflat(p));
    for (int i = 0; i < n; ++i) {
      double prod = 1.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) prod *= s[static_cast<std::size_t>(j)];
      }
      auction.win_value[static_cast<std::size_t>(i)].push_back(prod + eps * s[static_cast<std::size_t>(i)]);
    }
  }
  return auction_to_public_projects(auction);
}

Instance projects_lower_bound(int n, double H, double eps) {
  if (n < 1) throw DomainError("projects_lower_bound: n must be >= 1");
  if (n > 16) throw DomainError("projects_lower_bound: n must be <= 16");
  if (!(H > 0.0)) throw DomainError("projects_lower_bound: H must be > 0");
  if (!(eps >= 0.0)) throw DomainError("projects_lower_bound: eps must be >= 0");
  OutcomeSet outcomes(n + 1, 1);
  std::vector<ValuationSpec> valuations;
  for (int i = 0; i < n; ++i) {
    Rows coeffs(static_cast<std::size_t>(outcomes.size()),
                std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    const auto own = static_cast<std::size_t>(i) + 1;
    for (int j = 0; j <= n; ++j) {
      auto& row = coeffs[static_cast<std::size_t>(outcomes.index_of({j}))];
      if (j == 0) {
        row[0] = 1.0;
        row[own] = eps;
      } else {
        row[own] = eps / (j + 1);
      }
      if (j == i + 1) {
        const auto next = static_cast<std::size_t>((i + 1) % n) + 1;
        row[next] += std::pow(H, i + 1);
      }
    }
    valuations.emplace_back(LinearValuation{std::move(coeffs)});
  }
  return Instance(binary_grid(n), std::move(outcomes), std::move(valuations));
}

Instance cross_sos() {
  const std::vector<double> pts{0.0, 0.5, 1.0};
  SignalGrid grid({pts, pts});
  OutcomeSet outcomes(2, 1);
  // Outcome rows: empty, {0}, {1}. Each agent's others-profile is the other
  // agent's grid index.
  SeparableSosValuation a0{Rows{{0, 0, 0}, pts, {0, 0, 0}}, Rows{{0, 0, 0}, {0, 0, 0}, pts}};
  SeparableSosValuation a1{Rows{{0, 0, 0}, {0, 0, 0}, pts}, Rows{{0, 0, 0}, pts, {0, 0, 0}}};
  return Instance(std::move(grid), std::move(outcomes), {a0, a1});
}

RandomKind parse_kind(const std::string& name) {
  if (name == "decomposable") return RandomKind::kDecomposable;
  if (name == "separable_sos") return RandomKind::kSeparableSos;
  if (name == "linear") return RandomKind::kLinear;
  throw DomainError("random: unknown kind '" + name + "' (decomposable|separable_sos|linear)");
}

Instance random_instance(RandomKind kind, int n, int m, int k, int grid_size, std::uint64_t seed) {
  if (n < 1 || n > 8) throw DomainError("random: n must be in [1, 8]");
  if (m < 1 || m > 5) throw DomainError("random: m must be in [1, 5]");
  if (k < 1 || k > m) throw DomainError("random: k must be in [1, m]");
  if (grid_size < 2 || grid_size > 4) throw DomainError("random: grid size must be in [2, 4]");
  std::mt19937_64 rng(seed);

  std::vector<std::vector<double>> points(static_cast<std::size_t>(n));
  for (auto& p : points) {
    double x = eighths(uniform(rng, 0.0, 0.5));
    for (int t = 0; t < grid_size; ++t) {
      p.push_back(x);
      x += eighths(uniform(rng, 0.25, 1.25));
    }
  }
  SignalGrid grid(points);
  OutcomeSet outcomes(m, k);
  const auto mu = static_cast<std::size_t>(outcomes.size());
  const std::size_t P = grid.profile_count();

  std::vector<ValuationSpec> valuations;
  for (int i = 0; i < n; ++i) {
    const std::size_t others = grid.others_count(i);
    const auto K = static_cast<std::size_t>(grid.size(i));
    switch (kind) {
      case RandomKind::kLinear: {
        Rows coeffs(mu, std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        for (std::size_t a = 1; a < mu; ++a) {
          for (double& c : coeffs[a]) c = eighths(uniform(rng, 0.0, 1.0));
        }
        valuations.emplace_back(LinearValuation{std::move(coeffs)});
        break;
      }
      case RandomKind::kDecomposable: {
        // vhat strictly increasing in s_i on every line; g >= -vhat(0) h so
        // the composed value is non-negative.
        DecomposableValuation v;
        v.vhat.assign(P, 0.0);
        for (std::size_t o = 0; o < others; ++o) {
          double x = eighths(uniform(rng, 0.0, 1.0));
          for (std::size_t t = 0; t < K; ++t) {
            v.vhat[grid.flat(grid.from_others(i, o, static_cast<int>(t)))] = x;
            x += eighths(uniform(rng, 0.125, 1.125));
          }
        }
        v.h.assign(mu, std::vector<double>(others, 0.0));
        v.g.assign(mu, std::vector<double>(others, 0.0));
        for (std::size_t a = 1; a < mu; ++a) {
          for (std::size_t o = 0; o < others; ++o) {
            const double h = eighths(uniform(rng, 0.0, 1.0));
            const double floor = -v.vhat[grid.flat(grid.from_others(i, o, 0))] * h;
            v.h[a][o] = h;
            v.g[a][o] = std::max(floor, eighths(uniform(rng, floor, 1.0)));
          }
        }
        valuations.emplace_back(std::move(v));
        break;
      }
      case RandomKind::kSeparableSos: {
        // h increasing in s_i; g a sum of budget-additive terms
        // min(sum_j c_j s_j, B), each monotone and submodular.
        SeparableSosValuation v;
        v.h.assign(mu, std::vector<double>(K, 0.0));
        v.g.assign(mu, std::vector<double>(others, 0.0));
        for (std::size_t a = 1; a < mu; ++a) {
          double x = eighths(uniform(rng, 0.0, 0.5));
          for (std::size_t t = 0; t < K; ++t) {
            v.h[a][t] = x;
            x += eighths(uniform(rng, 0.0, 1.0));
          }
          const int terms = 1 + static_cast<int>(rng() % 2);
          for (int t = 0; t < terms; ++t) {
            std::vector<double> c(static_cast<std::size_t>(n));
            for (double& cj : c) cj = eighths(uniform(rng, 0.0, 1.0));
            const double budget = eighths(uniform(rng, 0.5, 2.0));
            for (std::size_t o = 0; o < others; ++o) {
              const auto s = grid.signals(grid.from_others(i, o, 0));
              double lin = 0.0;
              for (int j = 0; j < n; ++j) {
                if (j != i) lin += c[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(j)];
              }
              v.g[a][o] += std::min(lin, budget);
            }
          }
        }
        valuations.emplace_back(std::move(v));
        break;
      }
    }
  }
  return Instance(std::move(grid), std::move(outcomes), std::move(valuations));
}

std::vector<std::string> names() {
  return {"running_example",    "mixed_decomposability", "deterministic_impossibility",
          "no_sos_lower_bound", "projects_lower_bound",  "cross_sos"};
}

Instance build(const std::string& name, const Params& params) {
  auto allow = [&](std::initializer_list<const char*> keys) {
    for (const auto& [key, value] : params) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
        throw DomainError("catalog: " + name + " does not take parameter '" + key + "'");
      }
    }
  };
  if (name == "running_example") {
    allow({});
    return running_example();
  }
  if (name == "mixed_decomposability") {
    allow({});
    return mixed_decomposability();
  }
  if (name == "deterministic_impossibility") {
    allow({"H"});
    return deterministic_impossibility(param(params, "H", 100.0));
  }
  if (name == "no_sos_lower_bound") {
    allow({"n", "eps"});
    return no_sos_lower_bound(int_param(params, "n", 3), param(params, "eps", 0.01));
  }
  if (name == "projects_lower_bound") {
    allow({"n", "H", "eps"});
    return projects_lower_bound(int_param(params, "n", 2), param(params, "H", 100.0),
                                param(params, "eps", 0.01));
  }
  if (name == "cross_sos") {
    allow({});
    return cross_sos();
  }
  throw DomainError("catalog: unknown instance '" + name + "'");
}

}  // namespace idv::catalog
