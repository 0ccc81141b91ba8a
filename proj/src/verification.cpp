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

#include "idv/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "idv/matrix_game.hpp"
#include "idv/parallel.hpp"

namespace idv {
namespace {

constexpr int kMaxLemmaAgents = 20;

double expected_value(const ValueTable& values, int agent, std::size_t profile,
                      std::span<const double> dist) {
  double x = 0.0;
  for (std::size_t a = 0; a < dist.size(); ++a) {
    if (dist[a] != 0.0) x += dist[a] * values.at(agent, profile, static_cast<int>(a));
  }
  return x;
}

}  // namespace

CheckReport check_ex_post_ic_ir(const Instance& instance, const SocialChoiceFunction& f,
                                const PaymentTable& payments, std::span<const int> excluded) {
  require_compatible(instance, f);
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  if (payments.profile_count() != grid.profile_count() || payments.agents() != n) {
    throw DomainError("icir: payment table shape does not match the instance grid");
  }
  std::vector<char> out(static_cast<std::size_t>(n), 0);
  for (int a : excluded) {
    if (a < 0 || a >= n) throw DomainError("icir: excluded agent out of range");
    out[static_cast<std::size_t>(a)] = 1;
  }
  const ValueTable values(instance);

  std::vector<std::pair<int, std::size_t>> lines;
  for (int i = 0; i < n; ++i) {
    for (std::size_t o = 0; o < grid.others_count(i); ++o) lines.emplace_back(i, o);
  }
  struct LineOutcome {
    std::optional<Witness> witness;
    double slack = std::numeric_limits<double>::infinity();
  };
  auto results = parallel_map(lines.size(), [&](std::size_t t) {
    const auto [i, o] = lines[t];
    const int K = grid.size(i);
    const bool shut = out[static_cast<std::size_t>(i)] != 0;
    std::vector<std::size_t> at(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) at[static_cast<std::size_t>(k)] = grid.flat(grid.from_others(i, o, k));
    LineOutcome result;
    for (int k = 0; k < K && !result.witness; ++k) {
      const std::size_t truth = at[static_cast<std::size_t>(k)];
      auto utility = [&](std::size_t reported) {
        const double v = shut ? 0.0 : expected_value(values, i, truth, f.at(reported));
        return v - payments.at(reported, i);
      };
      const double honest = utility(truth);
      result.slack = std::min(result.slack, honest);
      if (honest < -kTol) {
        Witness w;
        w.agent = i;
        w.profile = grid.unflat(truth);
        w.own = {k};
        w.slack = honest;
        w.detail = "individual rationality: truthful utility is negative";
        result.witness = w;
        break;
      }
      for (int b = 0; b < K; ++b) {
        if (b == k) continue;
        const double margin = honest - utility(at[static_cast<std::size_t>(b)]);
        result.slack = std::min(result.slack, margin);
        if (margin < -kTol) {
          Witness w;
          w.agent = i;
          w.profile = grid.unflat(truth);
          w.upper = grid.unflat(at[static_cast<std::size_t>(b)]);
          w.own = {k, b};
          w.slack = margin;
          w.detail = "incentive compatibility: misreporting gains " + std::to_string(-margin);
          result.witness = w;
          break;
        }
      }
    }
    return result;
  });

  CheckReport report{"icir", true, std::nullopt, 0.0};
  double slack = std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    slack = std::min(slack, r.slack);
    if (r.witness && !report.witness) {
      report.verdict = false;
      report.witness = std::move(r.witness);
    }
  }
  report.slack = report.witness ? report.witness->slack : (std::isfinite(slack) ? slack : 0.0);
  return report;
}

RatioResult approximation_ratio(const Instance& instance, const SocialChoiceFunction& f) {
  require_compatible(instance, f);
  const ValueTable values(instance);
  const int n = instance.agents();
  const int mu = instance.outcomes().size();
  RatioResult result;
  bool first = true;
  for (std::size_t p = 0; p < instance.grid().profile_count(); ++p) {
    double opt = 0.0;
    for (int a = 0; a < mu; ++a) {
      double w = 0.0;
      for (int i = 0; i < n; ++i) w += values.at(i, p, a);
      opt = std::max(opt, w);
    }
    double got = 0.0;
    for (int i = 0; i < n; ++i) got += expected_value(values, i, p, f.at(p));
    const double ratio = opt <= 0.0 ? 1.0 : got / opt;
    if (first || ratio < result.ratio) {
      result.ratio = ratio;
      result.profile = p;
      first = false;
    }
  }
  return result;
}

KeyLemmaMargin key_lemma_margin(const SignalGrid& grid, const GridFunction& fn,
                                std::span<const int> profile, int agent) {
  const int n = grid.agents();
  if (n > kMaxLemmaAgents) {
    throw ResourceError("key lemma: 2^(n-1) subsets with n = " + std::to_string(n) +
                        " exceed the enumeration bound");
  }
  if (agent < 0 || agent >= n || static_cast<int>(profile.size()) != n) {
    throw DomainError("key lemma: agent or profile out of range");
  }
  std::vector<int> others;
  for (int j = 0; j < n; ++j) {
    if (j != agent) others.push_back(j);
  }
  const std::size_t subsets = std::size_t{1} << others.size();
  double total = 0.0;
  GridProfile q(static_cast<std::size_t>(n));
  for (std::size_t bits = 0; bits < subsets; ++bits) {
    q.assign(static_cast<std::size_t>(n), 0);
    q[static_cast<std::size_t>(agent)] = profile[static_cast<std::size_t>(agent)];
    for (std::size_t t = 0; t < others.size(); ++t) {
      if ((bits >> t) & 1U) {
        const auto j = static_cast<std::size_t>(others[t]);
        q[j] = profile[j];
      }
    }
    total += fn(q);
  }
  return {total / static_cast<double>(subsets), 0.5 * fn(profile)};
}

KeyLemmaMargin key_lemma_margin(const Instance& instance, int agent, int outcome,
                                std::span<const int> profile) {
  if (outcome < 0 || outcome >= instance.outcomes().size()) {
    throw DomainError("key lemma: outcome index out of range");
  }
  return key_lemma_margin(
      instance.grid(),
      [&](std::span<const int> q) { return instance.value(agent, outcome, q); }, profile, agent);
}

double maxmin_value(const std::vector<std::vector<double>>& payoff) {
  return solve_matrix_game(payoff).value;
}

MaxMinResult fsc_maxmin_oracle(const Instance& instance, const MaxMinOptions& options) {
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  const int mu = instance.outcomes().size();
  if (mu > options.max_outcomes) {
    throw ResourceError("maxmin oracle: " + std::to_string(mu) + " outcomes exceed the bound of " +
                        std::to_string(options.max_outcomes));
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(grid.size(i)) > options.max_axis) {
      throw ResourceError("maxmin oracle: agent " + std::to_string(i) + " has more than " +
                          std::to_string(options.max_axis) + " grid points");
    }
    const auto& spec = instance.valuation(i);
    if (!std::holds_alternative<LinearValuation>(spec) &&
        !std::holds_alternative<DecomposableValuation>(spec) &&
        !check_decomposable(instance, i).verdict) {
      throw DomainError("maxmin oracle requires decomposable valuations; agent " +
                        std::to_string(i) + " is not");
    }
  }

  const std::size_t P = grid.profile_count();
  const ValueTable values(instance);
  // slope[i][p * mu + a] = dv_i(a)/ds_i at p; ratio[p * mu + a] = W(a, p) / OPT(p).
  std::vector<std::vector<double>> slope(static_cast<std::size_t>(n));
  std::vector<double> ratio(P * static_cast<std::size_t>(mu));
  std::vector<GridProfile> profiles(P);
  for (std::size_t p = 0; p < P; ++p) {
    profiles[p] = grid.unflat(p);
    double opt = 0.0;
    std::vector<double> w(static_cast<std::size_t>(mu), 0.0);
    for (int a = 0; a < mu; ++a) {
      for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(a)] += values.at(i, p, a);
      opt = std::max(opt, w[static_cast<std::size_t>(a)]);
    }
    for (int a = 0; a < mu; ++a) {
      ratio[p * static_cast<std::size_t>(mu) + static_cast<std::size_t>(a)] =
          opt <= 0.0 ? 1.0 : w[static_cast<std::size_t>(a)] / opt;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (grid.size(i) < 2) continue;
    auto& s = slope[static_cast<std::size_t>(i)];
    s.resize(P * static_cast<std::size_t>(mu));
    for (std::size_t p = 0; p < P; ++p) {
      const auto v = slope_vector(instance, i, profiles[p], i);
      std::copy(v.begin(), v.end(), s.begin() + static_cast<std::ptrdiff_t>(p * static_cast<std::size_t>(mu)));
    }
  }

  // Depth-first assignment in flat order. Every lower point on a line has a
  // smaller flat index, so each f-sc pair is checked once its upper end is set.
  std::vector<int> assign(P, -1);
  std::set<std::vector<double>> rows;
  auto feasible = [&](std::size_t p, int a) {
    for (int i = 0; i < n; ++i) {
      if (grid.size(i) < 2) continue;
      const int k = profiles[p][static_cast<std::size_t>(i)];
      const auto& s = slope[static_cast<std::size_t>(i)];
      for (int l = 0; l < k; ++l) {
        const std::size_t q = p - static_cast<std::size_t>(k - l) * grid.stride(i);
        const std::size_t base = q * static_cast<std::size_t>(mu);
        if (s[base + static_cast<std::size_t>(a)] - s[base + static_cast<std::size_t>(assign[q])] < -kTol) {
          return false;
        }
      }
    }
    return true;
  };
  auto recurse = [&](auto&& self, std::size_t p) -> void {
    if (p == P) {
      std::vector<double> row(P);
      for (std::size_t q = 0; q < P; ++q) {
        row[q] = ratio[q * static_cast<std::size_t>(mu) + static_cast<std::size_t>(assign[q])];
      }
      rows.insert(std::move(row));
      if (rows.size() > options.max_rows) {
        throw ResourceError("maxmin oracle: more than " + std::to_string(options.max_rows) +
                            " distinct f-single-crossing choice functions");
      }
      return;
    }
    for (int a = 0; a < mu; ++a) {
      if (!feasible(p, a)) continue;
      assign[p] = a;
      self(self, p + 1);
    }
    assign[p] = -1;
  };
  recurse(recurse, 0);

  MaxMinResult result;
  result.payoff.assign(rows.begin(), rows.end());
  result.feasible = result.payoff.size();
  const GameSolution sol = solve_matrix_game(result.payoff);
  result.value = sol.value;
  result.mixture = sol.row_strategy;
  return result;
}

}  // namespace idv
