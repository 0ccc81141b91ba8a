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

#include "idv/payments.hpp"

#include <string>

#include "idv/parallel.hpp"

namespace idv {
namespace {

std::size_t line_profile(const SignalGrid& grid, int agent, std::size_t others, int k) {
  return grid.flat(grid.from_others(agent, others, k));
}

void check_line_args(const Instance& instance, const SocialChoiceFunction& f, int agent,
                     std::size_t others_index) {
  require_compatible(instance, f);
  if (agent < 0 || agent >= instance.agents()) {
    throw DomainError("payments: agent index out of range");
  }
  if (others_index >= instance.grid().others_count(agent)) {
    throw DomainError("payments: s_-i index out of range");
  }
}

double anchor_value(const Instance& instance, const SocialChoiceFunction& f, int agent,
                    std::size_t others_index, const Anchor& anchor) {
  const double bound = tight_anchor(instance, f, agent, others_index);
  switch (anchor.policy) {
    case AnchorPolicy::kTight:
      return bound;
    case AnchorPolicy::kZero:
      if (bound < -kTol) throw DomainError("payments: zero anchor exceeds the anchor bound");
      return 0.0;
    case AnchorPolicy::kCustom:
      break;
  }
  const auto a = static_cast<std::size_t>(agent);
  if (a >= anchor.custom.size() || others_index >= anchor.custom[a].size()) {
    throw DomainError("payments: custom anchor missing for agent " + std::to_string(agent) +
                      ", s_-i index " + std::to_string(others_index));
  }
  const double value = anchor.custom[a][others_index];
  if (value > bound + kTol) {
    throw DomainError("payments: custom anchor " + std::to_string(value) +
                      " exceeds <v_i(0, s_-i), f(0, s_-i)> = " + std::to_string(bound));
  }
  return value;
}

std::vector<double> jump_sum(const Instance& instance, const ValueTable* values,
                             const SocialChoiceFunction& f, int agent, std::size_t others,
                             double start) {
  const SignalGrid& grid = instance.grid();
  const int K = grid.size(agent);
  const int mu = instance.outcomes().size();
  std::vector<double> pay(static_cast<std::size_t>(K));
  pay[0] = start;
  std::size_t prev = line_profile(grid, agent, others, 0);
  for (int k = 1; k < K; ++k) {
    const std::size_t cur = line_profile(grid, agent, others, k);
    const auto f_prev = f.at(prev);
    const auto f_cur = f.at(cur);
    const GridProfile profile = grid.unflat(cur);
    double jump = 0.0;
    for (int a = 0; a < mu; ++a) {
      const double df = f_cur[static_cast<std::size_t>(a)] - f_prev[static_cast<std::size_t>(a)];
      if (df == 0.0) continue;
      const double v = values ? values->at(agent, cur, a) : instance.value(agent, a, profile);
      jump += v * df;
    }
    pay[static_cast<std::size_t>(k)] = pay[static_cast<std::size_t>(k) - 1] + jump;
    prev = cur;
  }
  return pay;
}

}  // namespace

double tight_anchor(const Instance& instance, const SocialChoiceFunction& f, int agent,
                    std::size_t others_index) {
  check_line_args(instance, f, agent, others_index);
  const GridProfile bottom = instance.grid().from_others(agent, others_index, 0);
  const auto dist = f.at(instance.grid().flat(bottom));
  double x = 0.0;
  for (int a = 0; a < instance.outcomes().size(); ++a) {
    const double w = dist[static_cast<std::size_t>(a)];
    if (w != 0.0) x += w * instance.value(agent, a, bottom);
  }
  return x;
}

ThresholdSchedule threshold_payments(const Instance& instance, const SocialChoiceFunction& f,
                                     int agent, std::size_t others_index, const Anchor& anchor) {
  check_line_args(instance, f, agent, others_index);
  const SignalGrid& grid = instance.grid();
  const int K = grid.size(agent);
  std::vector<int> chosen(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto dist = f.at(line_profile(grid, agent, others_index, k));
    int point = -1;
    for (std::size_t a = 0; a < dist.size(); ++a) {
      if (dist[a] == 1.0) point = static_cast<int>(a);
    }
    if (point < 0) {
      throw DomainError("threshold payments: f is randomized at own signal index " +
                        std::to_string(k) + "; use payment_identity instead");
    }
    chosen[static_cast<std::size_t>(k)] = point;
  }

  ThresholdSchedule schedule;
  schedule.payments.resize(static_cast<std::size_t>(K));
  double pay = anchor_value(instance, f, agent, others_index, anchor);
  for (int k = 0; k < K; ++k) {
    const int a = chosen[static_cast<std::size_t>(k)];
    if (k == 0 || a != chosen[static_cast<std::size_t>(k) - 1]) {
      if (k > 0) {
        // p(x_j) = p(x_{j-1}) + v(a_j; x_j) - v(a_{j-1}; x_j)
        const GridProfile at = grid.from_others(agent, others_index, k);
        pay += instance.value(agent, a, at) -
               instance.value(agent, chosen[static_cast<std::size_t>(k) - 1], at);
      }
      schedule.regions.push_back({k, grid.value(agent, k), a, pay});
    }
    schedule.payments[static_cast<std::size_t>(k)] = pay;
  }
  return schedule;
}

std::vector<double> payment_identity_line(const Instance& instance, const SocialChoiceFunction& f,
                                          int agent, std::size_t others_index,
                                          const Anchor& anchor) {
  check_line_args(instance, f, agent, others_index);
  return jump_sum(instance, nullptr, f, agent, others_index,
                  anchor_value(instance, f, agent, others_index, anchor));
}

PaymentRule payment_identity(const Instance& instance, const SocialChoiceFunction& f,
                             const Anchor& anchor) {
  require_compatible(instance, f);
  const SignalGrid& grid = instance.grid();
  const ValueTable values(instance);
  PaymentRule rule{PaymentTable(grid.profile_count(), instance.agents()), anchor.policy};
  for (int i = 0; i < instance.agents(); ++i) {
    const auto columns = parallel_map(grid.others_count(i), [&](std::size_t o) {
      return jump_sum(instance, &values, f, i, o, anchor_value(instance, f, i, o, anchor));
    });
    for (std::size_t o = 0; o < columns.size(); ++o) {
      for (int k = 0; k < grid.size(i); ++k) {
        rule.table.set(line_profile(grid, i, o, k), i, columns[o][static_cast<std::size_t>(k)]);
      }
    }
  }
  return rule;
}

}  // namespace idv
