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

// Core model for public-projects instances with interdependent values.
//
// Signals live on a finite per-agent grid. A profile is addressed either by
// its vector of grid indices (GridProfile) or by its flat index in the
// canonical profile order (agent 0 is the most significant digit, so flat
// order is lexicographic order over index tuples). Outcomes are all subsets
// of at most k projects, enumerated by size and then lexicographically;
// project ids are 0-based.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "idv/report.hpp"

namespace idv {

/// Absolute tolerance for every equality/inequality comparison.
inline constexpr double kTol = 1e-9;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SignalGrid {
 public:
  SignalGrid() = default;
  explicit SignalGrid(std::vector<std::vector<double>> points);

  int agents() const { return static_cast<int>(points_.size()); }
  int size(int agent) const {
    return static_cast<int>(points_[static_cast<std::size_t>(agent)].size());
  }
  const std::vector<double>& points(int agent) const {
    return points_[static_cast<std::size_t>(agent)];
  }
  const std::vector<std::vector<double>>& all_points() const { return points_; }
  double value(int agent, int index) const {
    return points_[static_cast<std::size_t>(agent)]
                  [static_cast<std::size_t>(index)];
  }
  /// The agent's minimum grid point, used as its zero signal.
  double zero(int agent) const { return value(agent, 0); }

  std::size_t profile_count() const { return profile_count_; }
  std::size_t stride(int agent) const {
    return strides_[static_cast<std::size_t>(agent)];
  }

  std::size_t flat(std::span<const int> profile) const;
  GridProfile unflat(std::size_t flat_index) const;
  std::vector<double> signals(std::span<const int> profile) const;
  int index_of(int agent, double signal) const;  // -1 when off-grid
  std::optional<GridProfile> locate(std::span<const double> signals) const;

  /// Number of profiles of the agents other than `agent`.
  std::size_t others_count(int agent) const;
  /// Flat index of the sub-profile that drops `agent`, canonical order.
  std::size_t others_flat(int agent, std::span<const int> profile) const;
  /// Inverse of others_flat; the dropped agent's slot is set to `own`.
  GridProfile from_others(int agent, std::size_t others_index, int own) const;

  bool operator==(const SignalGrid&) const = default;

 private:
  std::vector<std::vector<double>> points_;
  std::vector<std::size_t> strides_;
  std::size_t profile_count_ = 0;
};

using Outcome = std::vector<int>;

class OutcomeSet {
 public:
  OutcomeSet() = default;
  OutcomeSet(int m, int k);

  int projects() const { return m_; }
  int max_size() const { return k_; }
  /// Number of alternatives (mu).
  int size() const { return static_cast<int>(outcomes_.size()); }
  const Outcome& at(int index) const {
    return outcomes_[static_cast<std::size_t>(index)];
  }
  const std::vector<Outcome>& all() const { return outcomes_; }
  int index_of(const Outcome& outcome) const;  // -1 when absent

  bool operator==(const OutcomeSet&) const = default;

 private:
  int m_ = 0;
  int k_ = 0;
  std::vector<Outcome> outcomes_;
};

std::string outcome_label(const Outcome& outcome);

class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  explicit OutcomeDistribution(std::vector<double> weights);

  static OutcomeDistribution point_mass(int outcome_count, int outcome);
  static OutcomeDistribution uniform(int outcome_count);

  std::span<const double> weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int outcome) const {
    return weights_[static_cast<std::size_t>(outcome)];
  }
  /// Outcome index when the distribution is a point mass.
  std::optional<int> point() const;

  bool operator==(const OutcomeDistribution&) const = default;

 private:
  std::vector<double> weights_;
};

// Valuation variants. Tables indexed by "others" use SignalGrid::others_flat
// of the owning agent; outcome-major tables are [outcome][index].

struct TabulatedValuation {
  std::vector<std::vector<double>> table;  // [profile][outcome]
  bool operator==(const TabulatedValuation&) const = default;
};

/// v(a; s) = coeffs[a][0] + sum_j coeffs[a][1 + j] * s_j
struct LinearValuation {
  std::vector<std::vector<double>> coeffs;
  bool operator==(const LinearValuation&) const = default;
};

/// v(a; s) = vhat(s) * h(a; s_-i) + g(a; s_-i)
struct DecomposableValuation {
  std::vector<double> vhat;                       // [profile]
  std::optional<std::vector<double>> vhat_slope;  // [profile], own signal
  std::vector<std::vector<double>> h;             // [outcome][others]
  std::vector<std::vector<double>> g;             // [outcome][others]
  bool operator==(const DecomposableValuation&) const = default;
};

/// v(a; s) = h(a; s_i) + g(a; s_-i)
struct SeparableSosValuation {
  std::vector<std::vector<double>> h;  // [outcome][own grid index]
  std::vector<std::vector<double>> g;  // [outcome][others]
  bool operator==(const SeparableSosValuation&) const = default;
};

using ValuationSpec = std::variant<TabulatedValuation, LinearValuation,
                                   DecomposableValuation, SeparableSosValuation>;

std::string variant_name(const ValuationSpec& spec);

class Instance {
 public:
  Instance() = default;
  /// Validates every invariant; throws DomainError naming the field.
  Instance(SignalGrid grid, OutcomeSet outcomes,
           std::vector<ValuationSpec> valuations);

  int agents() const { return grid_.agents(); }
  const SignalGrid& grid() const { return grid_; }
  const OutcomeSet& outcomes() const { return outcomes_; }
  const std::vector<ValuationSpec>& valuations() const { return valuations_; }
  const ValuationSpec& valuation(int agent) const {
    return valuations_[static_cast<std::size_t>(agent)];
  }

  /// v_agent(outcome; profile) on the grid.
  double value(int agent, int outcome, std::span<const int> profile) const;

  bool operator==(const Instance&) const = default;

 private:
  SignalGrid grid_;
  OutcomeSet outcomes_;
  std::vector<ValuationSpec> valuations_;
};

/// Dense [agent][profile][outcome] cache of an instance's values. The sweeps
/// in conditions/verification read through this instead of re-dispatching on
/// the valuation variant.
class ValueTable {
 public:
  explicit ValueTable(const Instance& instance);

  double at(int agent, std::size_t profile, int outcome) const {
    return data_[(static_cast<std::size_t>(agent) * profiles_ + profile) *
                     static_cast<std::size_t>(mu_) +
                 static_cast<std::size_t>(outcome)];
  }
  std::span<const double> row(int agent, std::size_t profile) const {
    return {data_.data() + (static_cast<std::size_t>(agent) * profiles_ +
                            profile) * static_cast<std::size_t>(mu_),
            static_cast<std::size_t>(mu_)};
  }
  int outcome_count() const { return mu_; }
  std::size_t profile_count() const { return profiles_; }

 private:
  std::size_t profiles_;
  int mu_;
  std::vector<double> data_;
};

class SocialChoiceFunction {
 public:
  SocialChoiceFunction() = default;
  SocialChoiceFunction(std::size_t profile_count, int outcome_count);

  static SocialChoiceFunction deterministic(std::span<const int> outcomes,
                                            int outcome_count);
  static SocialChoiceFunction constant(std::size_t profile_count,
                                       const OutcomeDistribution& dist);

  std::size_t profile_count() const { return profiles_; }
  int outcome_count() const { return mu_; }

  std::span<const double> at(std::size_t profile) const {
    return {weights_.data() + profile * static_cast<std::size_t>(mu_),
            static_cast<std::size_t>(mu_)};
  }
  void set(std::size_t profile, const OutcomeDistribution& dist);
  void set_point(std::size_t profile, int outcome);

  bool is_deterministic() const;
  /// Outcome index at a profile; throws DomainError when randomized there.
  int point(std::size_t profile) const;

  bool operator==(const SocialChoiceFunction&) const = default;

 private:
  std::size_t profiles_ = 0;
  int mu_ = 0;
  std::vector<double> weights_;
};

/// Checks that `scf` is tabulated for every profile of `instance`.
void require_compatible(const Instance& instance,
                        const SocialChoiceFunction& scf);

double inner(std::span<const double> a, std::span<const double> b);

// --- Operations -----------------------------------------------------------

/// Expected value <v_agent(s), dist> at a signal vector. Linear valuations
/// accept any signals; other variants require on-grid signals.
double evaluate(const Instance& instance, int agent,
                const OutcomeDistribution& dist,
                std::span<const double> signals);

double welfare(const Instance& instance, const OutcomeDistribution& dist,
               std::span<const double> signals);

/// dv_agent(outcome)/ds_wrt at a grid profile. Analytic for linear
/// valuations and for the own-signal slope of decomposable valuations that
/// carry vhat_slope; otherwise a forward difference on the grid (backward at
/// the top point).
double partial_derivative(const Instance& instance, int agent, int outcome,
                          std::span<const int> profile, int wrt);

/// Same as above for every outcome at once.
std::vector<double> slope_vector(const Instance& instance, int agent,
                                 std::span<const int> profile, int wrt);

double partial_derivative(const Instance& instance, int agent,
                          const OutcomeDistribution& dist,
                          std::span<const int> profile, int wrt);

/// Weak monotonicity of one agent's valuation in every signal. The witness
/// names the outcome, the lower profile, the raised agent and the (negative)
/// value change.
CheckReport is_monotone(const Instance& instance, int agent);

}  // namespace idv
