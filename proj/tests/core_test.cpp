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

#include <doctest.h>

#include <cmath>

#include "idv/catalog.hpp"
#include "idv/core.hpp"
#include "support.hpp"

using namespace idv;

TEST_CASE("grid indexing is lexicographic with agent 0 most significant") {
  SignalGrid g({{0, 1, 2}, {0, 5}, {1, 2}});
  CHECK(g.profile_count() == 12);
  CHECK(g.stride(0) == 4);
  CHECK(g.stride(2) == 1);
  const GridProfile p{2, 1, 0};
  CHECK(g.flat(p) == 10);
  CHECK(g.unflat(10) == p);
  CHECK(g.others_count(1) == 6);
  CHECK(g.others_flat(1, p) == 4);
  CHECK(g.from_others(1, 4, 0) == GridProfile{2, 0, 0});
  CHECK(g.index_of(1, 5.0) == 1);
  CHECK(g.index_of(1, 4.0) == -1);
  CHECK(g.zero(2) == 1.0);
  CHECK_FALSE(g.locate(std::vector<double>{0, 5, 3}).has_value());
}

TEST_CASE("grid rejects bad axes") {
  using Axes = std::vector<std::vector<double>>;
  CHECK_THROWS_AS(SignalGrid(Axes{{0, 0}}), DomainError);
  CHECK_THROWS_AS(SignalGrid(Axes{{1, 0}}), DomainError);
  CHECK_THROWS_AS(SignalGrid(Axes{{-1, 0}}), DomainError);
  CHECK_THROWS_AS(SignalGrid(Axes{{}}), DomainError);
}

TEST_CASE("outcomes enumerate by size then lexicographically") {
  OutcomeSet o(3, 2);
  REQUIRE(o.size() == 7);
  CHECK(o.at(0).empty());
  CHECK(o.at(1) == Outcome{0});
  CHECK(o.at(3) == Outcome{2});
  CHECK(o.at(4) == Outcome{0, 1});
  CHECK(o.at(6) == Outcome{1, 2});
  CHECK(o.index_of({0, 2}) == 5);
  CHECK(o.index_of({0, 1, 2}) == -1);
  CHECK(OutcomeSet(3, 3).size() == 8);
  CHECK(outcome_label({0, 2}) == "{0,2}");
}

TEST_CASE("distributions must be probability vectors") {
  CHECK_THROWS_AS(OutcomeDistribution({0.5, 0.6}), DomainError);
  CHECK_THROWS_AS(OutcomeDistribution({-0.5, 1.5}), DomainError);
  CHECK(OutcomeDistribution::point_mass(3, 2).point() == 2);
  CHECK_FALSE(OutcomeDistribution::uniform(3).point().has_value());
}

TEST_CASE("evaluate on the running example") {
  const Instance inst = catalog::running_example({0, 1, 2}, {1});
  const std::vector<double> s{1, 1};
  // Project "1" of the example is project 0 here.
  CHECK(evaluate(inst, 0, OutcomeDistribution::point_mass(4, 1), s) == doctest::Approx(3.0));
  CHECK(evaluate(inst, 0, OutcomeDistribution::point_mass(4, 0), s) == 0.0);
  const std::vector<double> s2{2, 1};
  CHECK(evaluate(inst, 0, OutcomeDistribution({0, 1.0 / 3, 1.0 / 3, 1.0 / 3}), s2) == doctest::Approx(3.0));
  // Linear valuations evaluate off the grid too.
  const std::vector<double> off{2.5, 1};
  CHECK(evaluate(inst, 0, OutcomeDistribution::point_mass(4, 3), off) == doctest::Approx(5.0));
}

TEST_CASE("tabulated valuations refuse off-grid signals") {
  const Instance inst = catalog::mixed_decomposability();
  const std::vector<double> off{0.5, 0, 0};
  CHECK_THROWS_AS(evaluate(inst, 2, OutcomeDistribution::point_mass(3, 1), off), DomainError);
}

TEST_CASE("welfare of the three-agent example") {
  const Instance inst = catalog::mixed_decomposability();
  CHECK(welfare(inst, OutcomeDistribution::point_mass(3, 1), std::vector<double>{1, 0, 0}) ==
        doctest::Approx(2.0));
  CHECK(welfare(inst, OutcomeDistribution::point_mass(3, 2), std::vector<double>{1, 2, 2}) ==
        doctest::Approx(16.0));
  const Instance zero = test::linear_instance({{0, 1}}, 1, 1, {{{0, 0}, {0, 0}}});
  CHECK(welfare(zero, OutcomeDistribution::point_mass(2, 1), std::vector<double>{1}) == 0.0);
}

TEST_CASE("partial derivatives") {
  const Instance re = catalog::running_example();
  for (std::size_t p = 0; p < re.grid().profile_count(); ++p) {
    const auto prof = re.grid().unflat(p);
    CHECK(partial_derivative(re, 0, 3, prof, 0) == doctest::Approx(2.0));
    CHECK(partial_derivative(re, 0, 2, prof, 0) == doctest::Approx(0.5));
    CHECK(partial_derivative(re, 0, 1, prof, 0) == doctest::Approx(0.0));
  }
  // v = s_0 s_1^2 for agent 1, project 1; d/ds_0 at (1, 2, .) is s_1^2 = 4.
  const Instance mixed = catalog::mixed_decomposability();
  CHECK(partial_derivative(mixed, 1, 2, GridProfile{1, 2, 0}, 0) == doctest::Approx(4.0));
  // Backward difference at the top grid point.
  CHECK(partial_derivative(mixed, 2, 2, GridProfile{2, 0, 2}, 2) == doctest::Approx(2.0 * (8 - 1)));
}

TEST_CASE("is_monotone") {
  CHECK(is_monotone(catalog::running_example(), 0).verdict);
  CHECK(is_monotone(catalog::running_example(), 1).verdict);
  const Instance dec = test::linear_instance({{0, 1}}, 1, 1, {{{0, 0}, {1, -1}}});
  const CheckReport r = is_monotone(dec, 0);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.witness);
  CHECK(r.witness->agent == 0);
  CHECK(r.witness->profile == GridProfile{0});
  CHECK(r.witness->outcomes == std::vector<int>{1});
  CHECK(r.witness->slack == doctest::Approx(-1.0));
  const Instance flat = test::linear_instance({{0, 1}}, 1, 1, {{{0, 0}, {2, 0}}});
  CHECK(is_monotone(flat, 0).verdict);
}

TEST_CASE("instances validate shapes and signs") {
  CHECK_THROWS_AS(Instance(SignalGrid({{0, 1}}), OutcomeSet(1, 1), {}), DomainError);
  CHECK_THROWS_AS(test::linear_instance({{0, 1}}, 1, 1, {{{0, 0}, {-1, 0}}}), DomainError);
  CHECK_THROWS_AS(test::linear_instance({{0, 1}}, 1, 1, {{{0, 0}}}), DomainError);
  TabulatedValuation t{{{0, 1}, {0, 2}, {0, 3}}};  // one profile short
  CHECK_THROWS_AS(Instance(SignalGrid({{0, 1, 2, 3}}), OutcomeSet(1, 1), {t}), DomainError);
}

TEST_CASE("decomposable composed values must stay non-negative") {
  DecomposableValuation v;
  v.vhat = {0, 1};
  v.h = {{0}, {1}};
  v.g = {{0}, {-0.5}};
  CHECK_THROWS_AS(Instance(SignalGrid({{0, 1}}), OutcomeSet(1, 1), {v}), DomainError);
  v.vhat = {1, 2};
  CHECK_NOTHROW(Instance(SignalGrid({{0, 1}}), OutcomeSet(1, 1), {v}));
}

TEST_CASE("value table agrees with direct evaluation") {
  const Instance inst = catalog::mixed_decomposability();
  const ValueTable t(inst);
  for (std::size_t p = 0; p < inst.grid().profile_count(); ++p) {
    const auto prof = inst.grid().unflat(p);
    for (int i = 0; i < 3; ++i) {
      for (int a = 0; a < 3; ++a) CHECK(t.at(i, p, a) == inst.value(i, a, prof));
    }
  }
}

TEST_CASE("social choice functions") {
  auto f = SocialChoiceFunction::deterministic(std::vector<int>{0, 2, 1}, 3);
  CHECK(f.is_deterministic());
  CHECK(f.point(1) == 2);
  f.set(2, OutcomeDistribution::uniform(3));
  CHECK_FALSE(f.is_deterministic());
  CHECK_THROWS_AS(f.point(2), DomainError);
  const Instance inst = catalog::running_example();
  CHECK_THROWS_AS(require_compatible(inst, f), DomainError);
}
