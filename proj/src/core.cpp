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

#include "idv/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace idv {
namespace {

constexpr std::size_t kMaxProfiles = 50'000'000;
constexpr std::size_t kMaxOutcomes = 100'000;
// Composed values may dip below zero by rounding only.
constexpr double kValueFloor = -1e-12;

std::string field(const std::string& base, std::size_t index) {
  return base + "[" + std::to_string(index) + "]";
}

}  // namespace

// --- SignalGrid -------------------------------------------------------------

SignalGrid::SignalGrid(std::vector<std::vector<double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("grid: at least one agent required");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (p.empty()) throw DomainError(field("grid", i) + ": no grid points");
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!std::isfinite(p[k]) || p[k] < 0.0) {
        throw DomainError(field(field("grid", i), k) +
                          ": signals must be finite and non-negative");
      }
      if (k > 0 && !(p[k] > p[k - 1])) {
        throw DomainError(field("grid", i) + ": points must be strictly increasing");
      }
    }
  }
  strides_.assign(points_.size(), 1);
  profile_count_ = 1;
  for (std::size_t i = points_.size(); i-- > 0;) {
    strides_[i] = profile_count_;
    profile_count_ *= points_[i].size();
    if (profile_count_ > kMaxProfiles) {
      throw ResourceError("grid: profile count exceeds " +
                          std::to_string(kMaxProfiles));
    }
  }
}

std::size_t SignalGrid::flat(std::span<const int> profile) const {
  std::size_t index = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    index += static_cast<std::size_t>(profile[i]) * strides_[i];
  }
  return index;
}

GridProfile SignalGrid::unflat(std::size_t flat_index) const {
  GridProfile profile(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    profile[i] = static_cast<int>(flat_index / strides_[i]);
    flat_index %= strides_[i];
  }
  return profile;
}

std::vector<double> SignalGrid::signals(std::span<const int> profile) const {
  std::vector<double> s(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    s[i] = points_[i][static_cast<std::size_t>(profile[i])];
  }
  return s;
}

int SignalGrid::index_of(int agent, double signal) const {
  const auto& p = points(agent);
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (std::abs(p[k] - signal) <= 1e-9 * std::max(1.0, std::abs(signal))) {
      return static_cast<int>(k);
    }
  }
  return -1;
}

std::optional<GridProfile> SignalGrid::locate(
    std::span<const double> signals) const {
  if (signals.size() != points_.size()) return std::nullopt;
  GridProfile profile(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    profile[i] = index_of(static_cast<int>(i), signals[i]);
    if (profile[i] < 0) return std::nullopt;
  }
  return profile;
}

std::size_t SignalGrid::others_count(int agent) const {
  return profile_count_ / points(agent).size();
}

std::size_t SignalGrid::others_flat(int agent,
                                    std::span<const int> profile) const {
  std::size_t index = 0;
  for (std::size_t j = 0; j < points_.size(); ++j) {
    if (static_cast<int>(j) == agent) continue;
    index = index * points_[j].size() + static_cast<std::size_t>(profile[j]);
  }
  return index;
}

GridProfile SignalGrid::from_others(int agent, std::size_t others_index,
                                    int own) const {
  GridProfile profile(points_.size());
  for (std::size_t j = points_.size(); j-- > 0;) {
    if (static_cast<int>(j) == agent) {
      profile[j] = own;
      continue;
    }
    profile[j] = static_cast<int>(others_index % points_[j].size());
    others_index /= points_[j].size();
  }
  return profile;
}

// --- OutcomeSet -------------------------------------------------------------

OutcomeSet::OutcomeSet(int m, int k) : m_(m), k_(k) {
  if (m < 1) throw DomainError("m: at least one project required");
  if (k < 1 || k > m) throw DomainError("k: must satisfy 1 <= k <= m");
  for (int size = 0; size <= k; ++size) {
    // Lexicographic combinations of `size` projects out of m.
    Outcome combo(static_cast<std::size_t>(size));
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      outcomes_.push_back(combo);
      if (outcomes_.size() > kMaxOutcomes) {
        throw ResourceError("outcomes: more than " +
                            std::to_string(kMaxOutcomes) + " alternatives");
      }
      int pos = size - 1;
      while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == m - size + pos) {
        --pos;
      }
      if (pos < 0) break;
      ++combo[static_cast<std::size_t>(pos)];
      for (int q = pos + 1; q < size; ++q) {
        combo[static_cast<std::size_t>(q)] =
            combo[static_cast<std::size_t>(q - 1)] + 1;
      }
    }
  }
}

int OutcomeSet::index_of(const Outcome& outcome) const {
  Outcome sorted = outcome;
  std::sort(sorted.begin(), sorted.end());
  auto it = std::find(outcomes_.begin(), outcomes_.end(), sorted);
  return it == outcomes_.end() ? -1
                               : static_cast<int>(it - outcomes_.begin());
}

std::string outcome_label(const Outcome& outcome) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (i) out << ',';
    out << outcome[i];
  }
  out << '}';
  return out.str();
}

// --- OutcomeDistribution ----------------------------------------------------

OutcomeDistribution::OutcomeDistribution(std::vector<double> weights)
    : weights_(std::move(weights)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < -1e-12) {
      throw DomainError("distribution: weights must be non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("distribution: weights must sum to 1");
  }
}

OutcomeDistribution OutcomeDistribution::point_mass(int outcome_count,
                                                    int outcome) {
  if (outcome < 0 || outcome >= outcome_count) {
    throw DomainError("distribution: outcome index out of range");
  }
  std::vector<double> w(static_cast<std::size_t>(outcome_count), 0.0);
  w[static_cast<std::size_t>(outcome)] = 1.0;
  return OutcomeDistribution(std::move(w));
}

OutcomeDistribution OutcomeDistribution::uniform(int outcome_count) {
  return OutcomeDistribution(std::vector<double>(
      static_cast<std::size_t>(outcome_count), 1.0 / outcome_count));
}

std::optional<int> OutcomeDistribution::point() const {
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (weights_[a] == 1.0) return static_cast<int>(a);
  }
  return std::nullopt;
}

// --- Valuations and Instance -------------------------------------------------

std::string variant_name(const ValuationSpec& spec) {
  switch (spec.index()) {
    case 0: return "tabulated";
    case 1: return "linear";
    case 2: return "decomposable";
    default: return "separable_sos";
  }
}

namespace {

void require_rows(const std::vector<std::vector<double>>& rows,
                  std::size_t count, std::size_t width,
                  const std::string& name, const char* row_kind,
                  const char* col_kind) {
  if (rows.size() != count) {
    throw DomainError(name + ": expected " + std::to_string(count) + " " +
                      row_kind + ", got " + std::to_string(rows.size()));
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw DomainError(field(name, r) + ": expected " + std::to_string(width) +
                        " " + col_kind + ", got " +
                        std::to_string(rows[r].size()));
    }
    for (double x : rows[r]) {
      if (!std::isfinite(x)) throw DomainError(field(name, r) + ": non-finite value");
    }
  }
}

}  // namespace

Instance::Instance(SignalGrid grid, OutcomeSet outcomes,
                   std::vector<ValuationSpec> valuations)
    : grid_(std::move(grid)),
      outcomes_(std::move(outcomes)),
      valuations_(std::move(valuations)) {
  const int n = grid_.agents();
  if (static_cast<int>(valuations_.size()) != n) {
    throw DomainError("valuations length ≠ n (got " +
                      std::to_string(valuations_.size()) + ", n = " +
                      std::to_string(n) + ")");
  }
  const auto mu = static_cast<std::size_t>(outcomes_.size());
  const std::size_t profiles = grid_.profile_count();
  for (int i = 0; i < n; ++i) {
    const std::string name = field("valuations", static_cast<std::size_t>(i));
    const std::size_t others = grid_.others_count(i);
    const auto own = static_cast<std::size_t>(grid_.size(i));
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, TabulatedValuation>) {
            require_rows(v.table, profiles, mu, name + ".table", "profiles",
                         "outcomes");
          } else if constexpr (std::is_same_v<T, LinearValuation>) {
            require_rows(v.coeffs, mu, static_cast<std::size_t>(n) + 1,
                         name + ".coeffs", "outcomes", "coefficients");
          } else if constexpr (std::is_same_v<T, DecomposableValuation>) {
            require_rows({v.vhat}, 1, profiles, name + ".vhat", "tables",
                         "profiles");
            if (v.vhat_slope) {
              require_rows({*v.vhat_slope}, 1, profiles, name + ".vhat_slope",
                           "tables", "profiles");
            }
            require_rows(v.h, mu, others, name + ".h", "outcomes",
                         "others-profiles");
            require_rows(v.g, mu, others, name + ".g", "outcomes",
                         "others-profiles");
            for (std::size_t a = 0; a < mu; ++a) {
              for (double x : v.h[a]) {
                if (x < 0.0) {
                  throw DomainError(field(name + ".h", a) + ": must be >= 0");
                }
              }
            }
          } else {
            require_rows(v.h, mu, own, name + ".h", "outcomes", "own points");
            require_rows(v.g, mu, others, name + ".g", "outcomes",
                         "others-profiles");
          }
        },
        valuations_[static_cast<std::size_t>(i)]);
  }
  // Composed values must be non-negative everywhere on the grid.
  GridProfile profile(static_cast<std::size_t>(n), 0);
  for (std::size_t p = 0; p < profiles; ++p) {
    profile = grid_.unflat(p);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < static_cast<int>(mu); ++a) {
        const double x = value(i, a, profile);
        if (!std::isfinite(x) || x < kValueFloor) {
          std::ostringstream msg;
          msg << field("valuations", static_cast<std::size_t>(i))
              << ": negative value " << x << " for outcome "
              << outcome_label(outcomes_.at(a)) << " at profile " << p;
          throw DomainError(msg.str());
        }
      }
    }
  }
}

double Instance::value(int agent, int outcome,
                       std::span<const int> profile) const {
  const auto a = static_cast<std::size_t>(outcome);
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, TabulatedValuation>) {
          return v.table[grid_.flat(profile)][a];
        } else if constexpr (std::is_same_v<T, LinearValuation>) {
          const auto& c = v.coeffs[a];
          double x = c[0];
          for (int j = 0; j < grid_.agents(); ++j) {
            x += c[static_cast<std::size_t>(j) + 1] *
                 grid_.value(j, profile[static_cast<std::size_t>(j)]);
          }
          return x;
        } else if constexpr (std::is_same_v<T, DecomposableValuation>) {
          const std::size_t o = grid_.others_flat(agent, profile);
          return v.vhat[grid_.flat(profile)] * v.h[a][o] + v.g[a][o];
        } else {
          const std::size_t o = grid_.others_flat(agent, profile);
          return v.h[a][static_cast<std::size_t>(
                     profile[static_cast<std::size_t>(agent)])] +
                 v.g[a][o];
        }
      },
      valuation(agent));
}

ValueTable::ValueTable(const Instance& instance)
    : profiles_(instance.grid().profile_count()),
      mu_(instance.outcomes().size()) {
  const int n = instance.agents();
  data_.resize(static_cast<std::size_t>(n) * profiles_ *
               static_cast<std::size_t>(mu_));
  for (std::size_t p = 0; p < profiles_; ++p) {
    const GridProfile profile = instance.grid().unflat(p);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < mu_; ++a) {
        data_[(static_cast<std::size_t>(i) * profiles_ + p) *
                  static_cast<std::size_t>(mu_) +
              static_cast<std::size_t>(a)] = instance.value(i, a, profile);
      }
    }
  }
}

// --- SocialChoiceFunction ---------------------------------------------------

SocialChoiceFunction::SocialChoiceFunction(std::size_t profile_count,
                                           int outcome_count)
    : profiles_(profile_count),
      mu_(outcome_count),
      weights_(profile_count * static_cast<std::size_t>(outcome_count), 0.0) {
  // Defaults to the first outcome everywhere so the table is always valid.
  for (std::size_t p = 0; p < profiles_; ++p) {
    weights_[p * static_cast<std::size_t>(mu_)] = 1.0;
  }
}

SocialChoiceFunction SocialChoiceFunction::deterministic(
    std::span<const int> outcomes, int outcome_count) {
  SocialChoiceFunction f(outcomes.size(), outcome_count);
  for (std::size_t p = 0; p < outcomes.size(); ++p) f.set_point(p, outcomes[p]);
  return f;
}

SocialChoiceFunction SocialChoiceFunction::constant(
    std::size_t profile_count, const OutcomeDistribution& dist) {
  SocialChoiceFunction f(profile_count, dist.size());
  for (std::size_t p = 0; p < profile_count; ++p) f.set(p, dist);
  return f;
}

void SocialChoiceFunction::set(std::size_t profile,
                               const OutcomeDistribution& dist) {
  if (dist.size() != mu_) {
    throw DomainError("scf: distribution has " + std::to_string(dist.size()) +
                      " outcomes, expected " + std::to_string(mu_));
  }
  std::copy(dist.weights().begin(), dist.weights().end(),
            weights_.begin() +
                static_cast<std::ptrdiff_t>(profile * static_cast<std::size_t>(mu_)));
}

void SocialChoiceFunction::set_point(std::size_t profile, int outcome) {
  if (outcome < 0 || outcome >= mu_) {
    throw DomainError("scf: outcome index out of range");
  }
  auto row = weights_.begin() +
             static_cast<std::ptrdiff_t>(profile * static_cast<std::size_t>(mu_));
  std::fill(row, row + mu_, 0.0);
  row[outcome] = 1.0;
}

bool SocialChoiceFunction::is_deterministic() const {
  for (double w : weights_) {
    if (w != 0.0 && w != 1.0) return false;
  }
  return true;
}

int SocialChoiceFunction::point(std::size_t profile) const {
  const auto row = at(profile);
  for (int a = 0; a < mu_; ++a) {
    if (row[static_cast<std::size_t>(a)] == 1.0) return a;
  }
  throw DomainError("scf: randomized at profile " + std::to_string(profile));
}

void require_compatible(const Instance& instance,
                        const SocialChoiceFunction& scf) {
  if (scf.profile_count() != instance.grid().profile_count() ||
      scf.outcome_count() != instance.outcomes().size()) {
    throw DomainError("scf: table shape does not match the instance grid");
  }
}

double inner(std::span<const double> a, std::span<const double> b) {
  double x = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) x += a[k] * b[k];
  return x;
}

// --- Operations -------------------------------------------------------------

double evaluate(const Instance& instance, int agent,
                const OutcomeDistribution& dist,
                std::span<const double> signals) {
  if (agent < 0 || agent >= instance.agents()) {
    throw DomainError("evaluate: agent index out of range");
  }
  if (dist.size() != instance.outcomes().size()) {
    throw DomainError("evaluate: distribution size does not match outcomes");
  }
  if (const auto* lin = std::get_if<LinearValuation>(&instance.valuation(agent))) {
    if (signals.size() != static_cast<std::size_t>(instance.agents())) {
      throw DomainError("evaluate: profile has the wrong number of signals");
    }
    double x = 0.0;
    for (int a = 0; a < dist.size(); ++a) {
      const auto& c = lin->coeffs[static_cast<std::size_t>(a)];
      double v = c[0];
      for (std::size_t j = 0; j < signals.size(); ++j) v += c[j + 1] * signals[j];
      x += dist[a] * v;
    }
    return x;
  }
  const auto profile = instance.grid().locate(signals);
  if (!profile) throw DomainError("evaluate: signal profile is off the grid");
  double x = 0.0;
  for (int a = 0; a < dist.size(); ++a) {
    if (dist[a] != 0.0) x += dist[a] * instance.value(agent, a, *profile);
  }
  return x;
}

double welfare(const Instance& instance, const OutcomeDistribution& dist,
               std::span<const double> signals) {
  double total = 0.0;
  for (int i = 0; i < instance.agents(); ++i) {
    total += evaluate(instance, i, dist, signals);
  }
  return total;
}

namespace {

double finite_difference(const Instance& instance, int agent, int outcome,
                         std::span<const int> profile, int wrt) {
  const SignalGrid& grid = instance.grid();
  GridProfile lo(profile.begin(), profile.end());
  GridProfile hi = lo;
  const auto w = static_cast<std::size_t>(wrt);
  if (lo[w] + 1 < grid.size(wrt)) {
    hi[w] += 1;
  } else {
    lo[w] -= 1;
  }
  return (instance.value(agent, outcome, hi) - instance.value(agent, outcome, lo)) /
         (grid.value(wrt, hi[w]) - grid.value(wrt, lo[w]));
}

}  // namespace

double partial_derivative(const Instance& instance, int agent, int outcome,
                          std::span<const int> profile, int wrt) {
  if (wrt < 0 || wrt >= instance.agents() || agent < 0 ||
      agent >= instance.agents()) {
    throw DomainError("partial_derivative: agent index out of range");
  }
  if (instance.grid().size(wrt) < 2) {
    throw DomainError("partial_derivative: agent " + std::to_string(wrt) +
                      " has fewer than 2 grid points");
  }
  const ValuationSpec& spec = instance.valuation(agent);
  if (const auto* lin = std::get_if<LinearValuation>(&spec)) {
    return lin->coeffs[static_cast<std::size_t>(outcome)]
                      [static_cast<std::size_t>(wrt) + 1];
  }
  if (const auto* dec = std::get_if<DecomposableValuation>(&spec);
      dec && wrt == agent && dec->vhat_slope) {
    const std::size_t o = instance.grid().others_flat(agent, profile);
    return (*dec->vhat_slope)[instance.grid().flat(profile)] *
           dec->h[static_cast<std::size_t>(outcome)][o];
  }
  return finite_difference(instance, agent, outcome, profile, wrt);
}

std::vector<double> slope_vector(const Instance& instance, int agent,
                                 std::span<const int> profile, int wrt) {
  std::vector<double> slopes(static_cast<std::size_t>(instance.outcomes().size()));
  for (int a = 0; a < instance.outcomes().size(); ++a) {
    slopes[static_cast<std::size_t>(a)] =
        partial_derivative(instance, agent, a, profile, wrt);
  }
  return slopes;
}

double partial_derivative(const Instance& instance, int agent,
                          const OutcomeDistribution& dist,
                          std::span<const int> profile, int wrt) {
  return inner(slope_vector(instance, agent, profile, wrt), dist.weights());
}

CheckReport is_monotone(const Instance& instance, int agent) {
  CheckReport report{"monotone", true, std::nullopt, 0.0};
  const SignalGrid& grid = instance.grid();
  const int n = instance.agents();
  const int mu = instance.outcomes().size();
  bool any = false;
  for (std::size_t p = 0; p < grid.profile_count(); ++p) {
    const GridProfile profile = grid.unflat(p);
    for (int j = 0; j < n; ++j) {
      if (profile[static_cast<std::size_t>(j)] + 1 >= grid.size(j)) continue;
      GridProfile up = profile;
      up[static_cast<std::size_t>(j)] += 1;
      for (int a = 0; a < mu; ++a) {
        const double delta =
            instance.value(agent, a, up) - instance.value(agent, a, profile);
        if (!any || delta < report.slack) report.slack = delta;
        any = true;
        if (delta < -kTol && !report.witness) {
          report.verdict = false;
          Witness w;
          w.agent = j;
          w.other_agent = agent;
          w.profile = profile;
          w.own = {profile[static_cast<std::size_t>(j)],
                   up[static_cast<std::size_t>(j)]};
          w.outcomes = {a};
          w.slack = delta;
          w.detail = "value decreases when the signal is raised";
          report.witness = w;
        }
      }
    }
  }
  if (report.witness) report.slack = report.witness->slack;
  return report;
}

}  // namespace idv
