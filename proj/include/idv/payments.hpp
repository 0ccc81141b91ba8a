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

#include "idv/core.hpp"

namespace idv {

/// Per-profile, per-agent payments.
class PaymentTable {
 public:
  PaymentTable() = default;
  PaymentTable(std::size_t profile_count, int agents)
      : profiles_(profile_count),
        agents_(agents),
        data_(profile_count * static_cast<std::size_t>(agents), 0.0) {}

  std::size_t profile_count() const { return profiles_; }
  int agents() const { return agents_; }
  double at(std::size_t profile, int agent) const {
    return data_[profile * static_cast<std::size_t>(agents_) +
                 static_cast<std::size_t>(agent)];
  }
  void set(std::size_t profile, int agent, double payment) {
    data_[profile * static_cast<std::size_t>(agents_) +
          static_cast<std::size_t>(agent)] = payment;
  }
  std::span<const double> row(std::size_t profile) const {
    return {data_.data() + profile * static_cast<std::size_t>(agents_),
            static_cast<std::size_t>(agents_)};
  }

  bool operator==(const PaymentTable&) const = default;

 private:
  std::size_t profiles_ = 0;
  int agents_ = 0;
  std::vector<double> data_;
};

enum class AnchorPolicy { kTight, kZero, kCustom };

/// Payment at each agent's zero signal. kTight charges the full expected
/// value <v_i(0, s_-i), f(0, s_-i)>; kCustom reads custom[agent][s_-i].
struct Anchor {
  AnchorPolicy policy = AnchorPolicy::kTight;
  std::vector<std::vector<double>> custom;
};

struct PaymentRule {
  PaymentTable table;
  AnchorPolicy anchor = AnchorPolicy::kTight;
};

/// Upper bound on the anchor: <v_i(0, s_-i), f(0, s_-i)>.
double tight_anchor(const Instance& instance, const SocialChoiceFunction& f,
                    int agent, std::size_t others_index);

/// One constant-outcome run of f along agent i's grid.
struct Region {
  int start = 0;           // first own grid index of the region
  double threshold = 0.0;  // its signal value
  int outcome = 0;
  double payment = 0.0;
};

struct ThresholdSchedule {
  std::vector<Region> regions;
  std::vector<double> payments;  // per own grid index
};

/// Threshold recursion for deterministic f along one line:
/// p(x_j) = p(x_{j-1}) + v_i(a_j; x_j) - v_i(a_{j-1}; x_j).
/// Throws DomainError when f is randomized on the line or the anchor
/// exceeds the tight bound.
ThresholdSchedule threshold_payments(const Instance& instance,
                                     const SocialChoiceFunction& f, int agent,
                                     std::size_t others_index,
                                     const Anchor& anchor = {});

/// Payment identity as a jump sum: at every grid step where f changes, add
/// <v_i at the step's upper point, change in f>. Works for randomized f.
std::vector<double> payment_identity_line(const Instance& instance,
                                          const SocialChoiceFunction& f,
                                          int agent, std::size_t others_index,
                                          const Anchor& anchor = {});

/// The payment identity for every agent and every profile.
PaymentRule payment_identity(const Instance& instance,
                             const SocialChoiceFunction& f,
                             const Anchor& anchor = {});

}  // namespace idv
