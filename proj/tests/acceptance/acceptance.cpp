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

// Acceptance suite. Usage: acceptance [N ...]; with no arguments every
// criterion runs. Prints one PASS/FAIL line per criterion and exits non-zero
// when any of the requested criteria fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"
#include "idv/catalog.hpp"
#include "idv/conditions.hpp"
#include "idv/mechanisms.hpp"
#include "idv/payments.hpp"
#include "idv/verification.hpp"

namespace {

using namespace idv;
using catalog::RandomKind;

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) note << "failed: " << what << "; ";
    pass = pass && ok;
  }
};

// 1. Running example regions, threshold payments and IC-IR.
void running_example(Outcome& r) {
  const Instance inst = catalog::running_example();
  const auto f = welfare_max_scf(inst);
  const auto& grid = inst.grid();
  for (int k = 0; k < grid.size(0); ++k) {
    const double s = grid.value(0, k);
    const int expect = s < 5.0 / 3.0 - kTol ? 1 : (s < 3.0 - kTol ? 2 : 3);
    r.require(f.point(static_cast<std::size_t>(k)) == expect, "region at s=" + std::to_string(s));
  }
  const ThresholdSchedule t = threshold_payments(inst, f, 0, 0);
  const double p0 = tight_anchor(inst, f, 0, 0);
  r.require(std::abs(p0 - 3.0) < 1e-12, "tight anchor is 3");
  const double expect[] = {p0, p0 - 7.0 / 6.0, p0 + 7.0 / 3.0};
  r.require(t.regions.size() == 3, "three regions");
  for (std::size_t j = 0; j < t.regions.size() && j < 3; ++j) {
    r.require(std::abs(t.regions[j].payment - expect[j]) < 1e-12, "region payment " + std::to_string(j));
  }
  double worst = 0.0;
  for (std::size_t j = 1; j < t.regions.size(); ++j) {
    const auto prof = grid.from_others(0, 0, t.regions[j].start);
    const double before = inst.value(0, t.regions[j - 1].outcome, prof) - t.regions[j - 1].payment;
    const double after = inst.value(0, t.regions[j].outcome, prof) - t.regions[j].payment;
    worst = std::max(worst, std::abs(before - after));
  }
  r.require(worst < 1e-12, "utility continuity");
  r.require(check_ex_post_ic_ir(inst, f, payment_identity(inst, f).table).verdict, "IC-IR");
  r.note << "payments (" << t.regions[0].payment << ", " << t.regions[1].payment << ", " << t.regions[2].payment
         << "), continuity gap " << worst;
}

// 2. f-sc, weak f-sc, W-Mon and C-Mon agree; agreement implies IC-IR.
void characterization(Outcome& r) {
  int instances = 0, positives = 0, disagreements = 0, icir_failures = 0;
  for (std::uint64_t seed = 0; seed < 240; ++seed) {
    std::mt19937_64 rng(seed * 7919 + 1);
    const int n = 1 + static_cast<int>(seed % 4);
    const int m = 1 + static_cast<int>((seed / 4) % 4);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    const int g = 2 + static_cast<int>((seed / 16) % 3);
    const Instance inst = seed % 3 == 0 ? test::aligned_decomposable(n, m, k, g, seed)
                                        : catalog::random_instance(RandomKind::kDecomposable, n, m, k, g, seed);
    const auto f = test::suite_scf(inst, static_cast<int>(seed % 6), rng);
    ++instances;
    const bool fsc = check_f_single_crossing(inst, f).verdict;
    const bool weak = check_weak_f_single_crossing(inst, f).verdict;
    const bool wmon = check_wmon(inst, f).verdict;
    const bool cmon = check_cmon(inst, f).verdict;
    if (!(fsc == weak && weak == wmon && wmon == cmon)) ++disagreements;
    if (fsc) {
      ++positives;
      if (!check_ex_post_ic_ir(inst, f, payment_identity(inst, f).table).verdict) ++icir_failures;
    }
  }
  r.require(disagreements == 0, "verdicts agree");
  r.require(icir_failures == 0, "payment identity is IC-IR whenever f-sc holds");
  r.note << instances << " instances, " << positives << " f-sc true, " << disagreements << " disagreements, "
         << icir_failures << " IC-IR failures";
}

struct SosCase {
  Instance inst;
  int k;
};

std::vector<SosCase> sos_suite() {
  std::vector<SosCase> out;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const int n = 1 + static_cast<int>(seed % 8);
    const int m = 1 + static_cast<int>((seed / 8) % 4);
    const int k = (seed % 5 == 0 && m >= 2) ? 2 : 1;
    const int g = 2 + static_cast<int>((seed / 3) % 2);
    out.push_back({catalog::random_instance(RandomKind::kSeparableSos, n, m, k, g, 1000 + seed), k});
  }
  return out;
}

// 3. Random-Sampling-VCG quarter bound and A-exclusion IC-IR.
void quarter_bound(Outcome& r) {
  int instances = 0, violations = 0, ic_failures = 0, subsets = 0;
  double tightest = 1e300;
  for (const SosCase& c : sos_suite()) {
    ++instances;
    const Instance inst = c.k > 1 ? k_to_one_reduction(c.inst) : c.inst;
    for (const auto& e : random_sampling_vcg_exact(inst)) {
      const double slack = e.expected - 0.25 * e.optimum;
      tightest = std::min(tightest, slack);
      if (slack < -1e-9) ++violations;
    }
    const int n = inst.agents();
    std::vector<std::vector<int>> sets;
    if (n <= 6) {
      for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> a;
        for (int i = 0; i < n; ++i) {
          if (mask >> i & 1) a.push_back(i);
        }
        sets.push_back(a);
      }
    } else {
      for (std::uint64_t s = 0; s < 16; ++s) sets.push_back(sample_excluded(n, s));
    }
    for (const auto& a : sets) {
      ++subsets;
      const MechanismResult m = a_exclusion_vcg_table(inst, a);
      if (!check_ex_post_ic_ir(inst, m.scf, m.payments, a).verdict) ++ic_failures;
    }
  }
  r.require(violations == 0, "expected welfare >= OPT/4");
  r.require(ic_failures == 0, "A-exclusion-VCG IC-IR");
  r.note << instances << " instances, min slack " << tightest << ", " << subsets << " excluded sets checked, "
         << ic_failures << " IC-IR failures";
}

// 4. Key Lemma margins.
void key_lemma(Outcome& r) {
  long checks = 0, failures = 0;
  double tightest = 1e300;
  for (const SosCase& c : sos_suite()) {
    const Instance& inst = c.inst;
    for (int i = 0; i < inst.agents(); ++i) {
      for (int a = 0; a < inst.outcomes().size(); ++a) {
        for (std::size_t p = 0; p < inst.grid().profile_count(); ++p) {
          const KeyLemmaMargin km = key_lemma_margin(inst, i, a, inst.grid().unflat(p));
          ++checks;
          tightest = std::min(tightest, km.lhs - km.rhs);
          if (km.lhs < km.rhs - 1e-9) ++failures;
        }
      }
    }
  }
  r.require(failures == 0, "lhs >= v/2");
  r.note << checks << " (agent, outcome, profile) triples, min margin " << tightest;
}

// 5. Max-min oracle on the lower-bound family.
void lower_bound(Outcome& r) {
  const Instance inst = catalog::projects_lower_bound(2, 100, 0.01);
  const MaxMinResult mm = fsc_maxmin_oracle(inst);
  const CheckReport ssc = check_strong_single_crossing(inst);
  r.require(!ssc.verdict && ssc.witness.has_value(), "slope-inversion witness");
  const double bound = 1.0 / 3.0 + 1e-4;
  r.require(mm.value <= bound, "oracle value <= 1/3 + 1e-4");
  char buf[160];
  std::snprintf(buf, sizeof buf, "oracle value %.12f vs bound %.12f over %zu f-sc rows", mm.value, bound,
                mm.feasible);
  r.note << buf;
}

// 6. Deterministic impossibility ratios.
void example_ratios(Outcome& r) {
  const double H = 100.0;
  const Instance inst = catalog::deterministic_impossibility(H);
  const auto first = SocialChoiceFunction::constant(2, OutcomeDistribution::point_mass(3, 1));
  const RatioResult always = approximation_ratio(inst, first);
  r.require(std::abs(always.ratio - 2.0 / H) < 1e-9, "always-project-1 ratio is 2/H");
  int wmon_count = 0;
  double best = 0.0;
  for (int a0 = 1; a0 <= 2; ++a0) {
    for (int a1 = 1; a1 <= 2; ++a1) {
      const auto f = SocialChoiceFunction::deterministic(std::vector<int>{a0, a1}, 3);
      if (!check_wmon(inst, f).verdict) continue;
      ++wmon_count;
      const double ratio = approximation_ratio(inst, f).ratio;
      best = std::max(best, ratio);
      r.require(ratio <= std::max(0.0, 2.0 / H) + 1e-9, "W-Mon allocation ratio");
    }
  }
  r.note << "always-project-1 ratio " << always.ratio << ", " << wmon_count
         << " of 4 allocations are W-Mon, best ratio " << best;
}

// 7. Decomposability frontier.
void decomposability(Outcome& r) {
  const Instance inst = catalog::mixed_decomposability();
  r.require(check_decomposable(inst, 0).verdict, "agent 0 accepted");
  r.require(check_decomposable(inst, 1).verdict, "agent 1 accepted");
  const CheckReport third = check_decomposable(inst, 2);
  r.require(!third.verdict && third.witness.has_value(), "agent 2 rejected");
  if (third.witness) {
    const Witness& w = *third.witness;
    auto value = [&](int own, int a) {
      auto prof = w.profile;
      prof[2] = own;
      return inst.value(2, a, prof);
    };
    const int a = w.outcomes[0], b = w.outcomes[1];
    bool verified = false;
    if (w.own.size() == 3) {
      const double minor = (value(w.own[1], a) - value(w.own[0], a)) * (value(w.own[2], b) - value(w.own[0], b)) -
                           (value(w.own[1], b) - value(w.own[0], b)) * (value(w.own[2], a) - value(w.own[0], a));
      verified = std::abs(minor) > 1e-7;
      r.note << "rank witness minor " << minor << "; ";
    } else if (w.own.size() == 2) {
      const double da = value(w.own[1], a) - value(w.own[0], a);
      const double db = value(w.own[1], b) - value(w.own[0], b);
      verified = da * db < 0;
      r.note << "sign witness (" << da << ", " << db << "); ";
    }
    r.require(verified, "witness re-verifies non-parallel differences");
  }
  int wmon_true = 0, impossible = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    std::mt19937_64 rng(seed + 77);
    const int n = 1 + static_cast<int>(seed % 3);
    const int m = 1 + static_cast<int>((seed / 3) % 3);
    const Instance d = seed % 2 ? catalog::random_instance(RandomKind::kDecomposable, n, m, 1, 3, seed)
                                : test::aligned_decomposable(n, m, 1, 3, seed);
    const auto f = test::suite_scf(d, static_cast<int>(seed % 6), rng);
    if (!check_wmon(d, f).verdict) continue;
    ++wmon_true;
    if (!check_ex_post_ic_ir(d, f, payment_identity(d, f).table).verdict) ++impossible;
  }
  r.require(impossible == 0, "W-Mon implies implementable on decomposable instances");
  r.note << wmon_true << " W-Mon decomposable cases, " << impossible << " not implementable";
}

// 8. SOS classification.
void sos_classification(Outcome& r) {
  const Instance ex = catalog::no_sos_lower_bound(3, 0.01);
  bool any_fail = false;
  for (int i = 0; i < ex.agents(); ++i) {
    const CheckReport rep = check_sos(ex, i, i + 1);
    if (rep.verdict) continue;
    any_fail = true;
    const CheckReport again = check_sos(ex, i, i + 1);
    r.require(again.witness == rep.witness, "witness reproducible");
    const Witness& w = *rep.witness;
    auto lo_up = w.profile, hi_up = w.upper;
    lo_up[static_cast<std::size_t>(w.agent)] += 1;
    hi_up[static_cast<std::size_t>(w.agent)] += 1;
    const double gap = (ex.value(i, i + 1, lo_up) - ex.value(i, i + 1, w.profile)) -
                       (ex.value(i, i + 1, hi_up) - ex.value(i, i + 1, w.upper));
    r.require(gap < -kTol, "witness re-verifies");
    if (i == 0) r.note << "product witness gap " << gap << "; ";
  }
  r.require(any_fail, "no-SOS lower-bound valuations fail SOS");

  SignalGrid g({{0, 0.5, 1}, {0, 0.5, 1}, {0, 0.5, 1}});
  const GridFunction additive = [&](std::span<const int> p) {
    return g.value(0, p[0]) + g.value(1, p[1]) + g.value(2, p[2]);
  };
  const GridFunction budget = [&](std::span<const int> p) {
    return std::min(g.value(0, p[0]) + g.value(1, p[1]), 1.0);
  };
  r.require(check_sos(g, additive).verdict, "additive passes");
  r.require(check_sos(g, budget).verdict, "min(s1 + s2, 1) passes");
  const GridFunction pointwise_min = [&](std::span<const int> p) { return std::min(g.value(0, p[0]), g.value(1, p[1])); };
  r.note << "additive and budget-additive pass; pointwise min(s1, s2) "
         << (check_sos(g, pointwise_min).verdict ? "passes" : "fails");
}

struct Criterion {
  const char* title;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"running example regions and threshold payments", 1.0, running_example},
      {"characterization equivalences on random decomposable instances", 120.0, characterization},
      {"Random-Sampling-VCG quarter bound and A-exclusion IC-IR", 300.0, quarter_bound},
      {"Key Lemma margins on the separable-SOS suite", 60.0, key_lemma},
      {"max-min oracle on the projects lower-bound instance", 60.0, lower_bound},
      {"deterministic impossibility ratios", 1.0, example_ratios},
      {"decomposability frontier", 10.0, decomposability},
      {"SOS classification", 1.0, sos_classification},
  };
  return all;
}

bool run_one(int id) {
  const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
  Outcome r;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.note << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > c.limit_seconds) {
    r.pass = false;
    r.note << "; runtime over " << c.limit_seconds << " s";
  }
  char t[32];
  std::snprintf(t, sizeof t, "%.3f s", secs);
  std::cout << (r.pass ? "PASS" : "FAIL") << " acceptance " << id << ": " << c.title << " [" << r.note.str()
            << "] (" << t << ")" << std::endl;
  return r.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int a = 1; a < argc; ++a) {
    const int id = std::atoi(argv[a]);
    if (id < 1 || id > static_cast<int>(criteria().size())) {
      std::cerr << "error: unknown criterion '" << argv[a] << "'\n";
      return 2;
    }
    ids.push_back(id);
  }
  if (ids.empty()) {
    for (int id = 1; id <= static_cast<int>(criteria().size()); ++id) ids.push_back(id);
  }
  bool ok = true;
  for (int id : ids) ok = run_one(id) && ok;
  return ok ? 0 : 1;
}
