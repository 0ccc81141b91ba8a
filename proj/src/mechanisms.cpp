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

#include "idv/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "idv/parallel.hpp"

namespace idv {
namespace {

constexpr std::size_t kMaxMetaProjects = 10'000;
constexpr int kMaxExactAgents = 20;

double total_welfare(const ValueTable& values, int agents, std::size_t profile, int outcome) {
  double w = 0.0;
  for (int i = 0; i < agents; ++i) w += values.at(i, profile, outcome);
  return w;
}

// Welfare slope along the direction that raises every movable signal.
double welfare_slope(const Instance& instance, const GridProfile& profile, int outcome) {
  double slope = 0.0;
  for (int j = 0; j < instance.agents(); ++j) {
    if (instance.grid().size(j) < 2) continue;
    for (int i = 0; i < instance.agents(); ++i) {
      slope += partial_derivative(instance, i, outcome, profile, j);
    }
  }
  return slope;
}

std::vector<char> exclusion_mask(int agents, std::span<const int> excluded) {
  std::vector<char> mask(static_cast<std::size_t>(agents), 0);
  for (int a : excluded) {
    if (a < 0 || a >= agents) {
      throw DomainError("excluded agent " + std::to_string(a) + " out of range");
    }
    mask[static_cast<std::size_t>(a)] = 1;
  }
  return mask;
}

void require_separable_single(const Instance& instance) {
  for (int i = 0; i < instance.agents(); ++i) {
    if (!std::holds_alternative<SeparableSosValuation>(instance.valuation(i))) {
      throw DomainError("A-exclusion-VCG requires separable valuations; agent " +
                        std::to_string(i) + " uses the " + variant_name(instance.valuation(i)) +
                        " variant");
    }
  }
  if (instance.outcomes().max_size() != 1) {
    throw DomainError("A-exclusion-VCG requires k = 1; apply k_to_one_reduction first");
  }
}

// Evaluates w_i and g_-i for one A-exclusion run.
class ExclusionRun {
 public:
  ExclusionRun(const Instance& instance, const std::vector<char>& in_a, std::span<const int> reports)
      : instance_(instance), in_a_(in_a), reports_(reports.begin(), reports.end()) {
    const int n = instance.agents();
    const int mu = instance.outcomes().size();
    const SignalGrid& grid = instance.grid();
    w_.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(mu), 0.0));
    restricted_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
      if (in_a_[static_cast<std::size_t>(i)]) continue;
      // s_i and s_A as reported, every other coordinate at its zero signal.
      GridProfile q(static_cast<std::size_t>(n), 0);
      for (int j = 0; j < n; ++j) {
        if (j == i || in_a_[static_cast<std::size_t>(j)]) {
          q[static_cast<std::size_t>(j)] = reports_[static_cast<std::size_t>(j)];
        }
      }
      restricted_[static_cast<std::size_t>(i)] = grid.others_flat(i, q);
      for (int a = 0; a < mu; ++a) {
        w_[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)] = instance.value(i, a, q);
      }
    }
  }

  // Lowest-index argmax of the sum of w over non-excluded agents except `skip`.
  std::pair<int, double> best(int skip) const {
    int arg = 0;
    double top = -1.0;
    for (int a = 0; a < instance_.outcomes().size(); ++a) {
      const double s = sum(a, skip);
      if (s > top) {
        top = s;
        arg = a;
      }
    }
    return {arg, top};
  }

  double sum(int outcome, int skip) const {
    double s = 0.0;
    for (int i = 0; i < instance_.agents(); ++i) {
      if (i == skip || in_a_[static_cast<std::size_t>(i)]) continue;
      s += w_[static_cast<std::size_t>(i)][static_cast<std::size_t>(outcome)];
    }
    return s;
  }

  double price(int agent, int chosen) const {
    const auto& v = std::get<SeparableSosValuation>(instance_.valuation(agent));
    const auto& g = v.g[static_cast<std::size_t>(chosen)];
    const double g_reported = g[instance_.grid().others_flat(agent, reports_)];
    const double g_restricted = g[restricted_[static_cast<std::size_t>(agent)]];
    return (g_reported - g_restricted) - sum(chosen, agent) + best(agent).second;
  }

 private:
  const Instance& instance_;
  const std::vector<char>& in_a_;
  GridProfile reports_;
  std::vector<std::vector<double>> w_;
  std::vector<std::size_t> restricted_;
};

MechanismRun run_exclusion(const Instance& instance, const std::vector<char>& in_a,
                           std::span<const int> reports) {
  const int n = instance.agents();
  MechanismRun run;
  run.payments.assign(static_cast<std::size_t>(n), 0.0);
  if (std::all_of(in_a.begin(), in_a.end(), [](char c) { return c != 0; })) return run;
  const ExclusionRun ex(instance, in_a, reports);
  run.outcome = ex.best(-1).first;
  for (int i = 0; i < n; ++i) {
    if (!in_a[static_cast<std::size_t>(i)]) run.payments[static_cast<std::size_t>(i)] = ex.price(i, run.outcome);
  }
  return run;
}

int exclusion_choice(const Instance& instance, const std::vector<char>& in_a,
                     std::span<const int> reports) {
  if (std::all_of(in_a.begin(), in_a.end(), [](char c) { return c != 0; })) return 0;
  return ExclusionRun(instance, in_a, reports).best(-1).first;
}

template <typename Fn>
std::vector<std::vector<double>> lift_rows(const std::vector<std::vector<double>>& rows,
                                           std::size_t count, Fn&& origin) {
  std::vector<std::vector<double>> out(count);
  for (std::size_t r = 0; r < count; ++r) out[r] = rows[static_cast<std::size_t>(origin(static_cast<int>(r)))];
  return out;
}

}  // namespace

SocialChoiceFunction welfare_max_scf(const Instance& instance) {
  const SignalGrid& grid = instance.grid();
  const ValueTable values(instance);
  const int n = instance.agents();
  const int mu = instance.outcomes().size();
  auto picks = parallel_map(grid.profile_count(), [&](std::size_t p) {
    double top = total_welfare(values, n, p, 0);
    for (int a = 1; a < mu; ++a) top = std::max(top, total_welfare(values, n, p, a));
    std::vector<int> tied;
    for (int a = 0; a < mu; ++a) {
      if (total_welfare(values, n, p, a) >= top - kTol) tied.push_back(a);
    }
    if (tied.size() == 1) return tied.front();
    const GridProfile profile = grid.unflat(p);
    int best = tied.front();
    double best_slope = welfare_slope(instance, profile, best);
    for (std::size_t t = 1; t < tied.size(); ++t) {
      const double s = welfare_slope(instance, profile, tied[t]);
      if (s > best_slope + kTol) {
        best = tied[t];
        best_slope = s;
      }
    }
    return best;
  });
  return SocialChoiceFunction::deterministic(picks, mu);
}

std::vector<double> optimal_welfare(const Instance& instance) {
  const ValueTable values(instance);
  const int n = instance.agents();
  std::vector<double> opt(instance.grid().profile_count());
  for (std::size_t p = 0; p < opt.size(); ++p) {
    double top = total_welfare(values, n, p, 0);
    for (int a = 1; a < instance.outcomes().size(); ++a) {
      top = std::max(top, total_welfare(values, n, p, a));
    }
    opt[p] = top;
  }
  return opt;
}

MechanismRun a_exclusion_vcg(const Instance& instance, std::span<const int> excluded,
                             std::span<const int> reports) {
  require_separable_single(instance);
  const int n = instance.agents();
  if (static_cast<int>(reports.size()) != n) {
    throw DomainError("A-exclusion-VCG: expected " + std::to_string(n) + " reports");
  }
  for (int i = 0; i < n; ++i) {
    if (reports[static_cast<std::size_t>(i)] < 0 ||
        reports[static_cast<std::size_t>(i)] >= instance.grid().size(i)) {
      throw DomainError("A-exclusion-VCG: report of agent " + std::to_string(i) + " is off the grid");
    }
  }
  return run_exclusion(instance, exclusion_mask(n, excluded), reports);
}

MechanismResult a_exclusion_vcg_table(const Instance& instance, std::span<const int> excluded) {
  require_separable_single(instance);
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  const auto mask = exclusion_mask(n, excluded);
  auto runs = parallel_map(grid.profile_count(), [&](std::size_t p) {
    return run_exclusion(instance, mask, grid.unflat(p));
  });
  MechanismResult result;
  result.scf = SocialChoiceFunction(grid.profile_count(), instance.outcomes().size());
  result.payments = PaymentTable(grid.profile_count(), n);
  for (std::size_t p = 0; p < runs.size(); ++p) {
    result.scf.set_point(p, runs[p].outcome);
    for (int i = 0; i < n; ++i) result.payments.set(p, i, runs[p].payments[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n; ++i) {
    if (mask[static_cast<std::size_t>(i)]) result.excluded.push_back(i);
  }
  return result;
}

std::vector<int> sample_excluded(int agents, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> excluded;
  for (int i = 0; i < agents; ++i) {
    if (rng() >> 63) excluded.push_back(i);
  }
  return excluded;
}

MechanismResult random_sampling_vcg(const Instance& instance, std::uint64_t seed) {
  MechanismResult result =
      a_exclusion_vcg_table(instance, sample_excluded(instance.agents(), seed));
  result.seed = seed;
  return result;
}

double exclusion_welfare(const Instance& instance, const ValueTable& values,
                         std::span<const int> excluded, std::size_t profile) {
  const auto mask = exclusion_mask(instance.agents(), excluded);
  const GridProfile reports = instance.grid().unflat(profile);
  const int chosen = exclusion_choice(instance, mask, reports);
  double w = 0.0;
  for (int i = 0; i < instance.agents(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) w += values.at(i, profile, chosen);
  }
  return w;
}

std::vector<ExpectedWelfare> random_sampling_vcg_exact(const Instance& instance) {
  require_separable_single(instance);
  const int n = instance.agents();
  if (n > kMaxExactAgents) {
    throw ResourceError("exact Random-Sampling-VCG enumerates 2^n subsets; n = " +
                        std::to_string(n) + " exceeds " + std::to_string(kMaxExactAgents));
  }
  const SignalGrid& grid = instance.grid();
  const ValueTable values(instance);
  const std::size_t subsets = std::size_t{1} << n;
  return parallel_map(grid.profile_count(), [&](std::size_t p) {
    const GridProfile reports = grid.unflat(p);
    std::vector<char> mask(static_cast<std::size_t>(n));
    double total = 0.0;
    for (std::size_t bits = 0; bits < subsets; ++bits) {
      for (int i = 0; i < n; ++i) mask[static_cast<std::size_t>(i)] = (bits >> i) & 1U;
      const int chosen = exclusion_choice(instance, mask, reports);
      for (int i = 0; i < n; ++i) {
        if (!mask[static_cast<std::size_t>(i)]) total += values.at(i, p, chosen);
      }
    }
    double opt = total_welfare(values, n, p, 0);
    for (int a = 1; a < instance.outcomes().size(); ++a) opt = std::max(opt, total_welfare(values, n, p, a));
    return ExpectedWelfare{p, total / static_cast<double>(subsets), opt};
  });
}

Instance auction_to_public_projects(const SingleItemAuction& auction) {
  const SignalGrid& grid = auction.grid;
  const int n = grid.agents();
  if (static_cast<int>(auction.win_value.size()) != n) {
    throw DomainError("auction: win_value length ≠ n");
  }
  OutcomeSet outcomes(n, 1);
  std::vector<ValuationSpec> valuations;
  for (int i = 0; i < n; ++i) {
    const auto& win = auction.win_value[static_cast<std::size_t>(i)];
    if (win.size() != grid.profile_count()) {
      throw DomainError("auction: win_value[" + std::to_string(i) + "] must cover every profile");
    }
    const int own = outcomes.index_of({i});
    TabulatedValuation v;
    v.table.assign(grid.profile_count(), std::vector<double>(static_cast<std::size_t>(outcomes.size()), 0.0));
    for (std::size_t p = 0; p < grid.profile_count(); ++p) v.table[p][static_cast<std::size_t>(own)] = win[p];
    valuations.emplace_back(std::move(v));
  }
  return Instance(grid, std::move(outcomes), std::move(valuations));
}

int meta_outcome_origin(int reduced_outcome) {
  return reduced_outcome == 0 ? 0 : reduced_outcome - 1;
}

Instance k_to_one_reduction(const Instance& instance) {
  const int mu = instance.outcomes().size();
  if (static_cast<std::size_t>(mu) > kMaxMetaProjects) {
    throw ResourceError("k_to_one_reduction: " + std::to_string(mu) +
                        " meta-projects exceed the bound of " + std::to_string(kMaxMetaProjects));
  }
  OutcomeSet reduced(mu, 1);
  const auto count = static_cast<std::size_t>(reduced.size());
  std::vector<ValuationSpec> valuations;
  for (const auto& spec : instance.valuations()) {
    valuations.push_back(std::visit(
        [&](const auto& v) -> ValuationSpec {
          using T = std::decay_t<decltype(v)>;
          T out = v;
          if constexpr (std::is_same_v<T, TabulatedValuation>) {
            for (std::size_t p = 0; p < v.table.size(); ++p) {
              out.table[p].resize(count);
              for (std::size_t r = 0; r < count; ++r) {
                out.table[p][r] = v.table[p][static_cast<std::size_t>(meta_outcome_origin(static_cast<int>(r)))];
              }
            }
          } else if constexpr (std::is_same_v<T, LinearValuation>) {
            out.coeffs = lift_rows(v.coeffs, count, meta_outcome_origin);
          } else {
            out.h = lift_rows(v.h, count, meta_outcome_origin);
            out.g = lift_rows(v.g, count, meta_outcome_origin);
          }
          return out;
        },
        spec));
  }
  return Instance(instance.grid(), std::move(reduced), std::move(valuations));
}

}  // namespace idv
