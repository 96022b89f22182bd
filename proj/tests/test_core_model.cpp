// Copyright 2026 The gaiauction Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gaiauction/core_model.hpp>
#include <gaiauction/golden.hpp>
#include <gaiauction/random.hpp>
#include <gaiauction/utility_gen.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gaiauction;

TEST(Schema, RejectsEmptyDomainAndDuplicates) {
  EXPECT_THROW(AttributeSchema(std::vector<Attribute>{Attribute{"a", {}}}), std::invalid_argument);
  EXPECT_THROW(AttributeSchema({{"a", {"0"}}, {"a", {"1"}}}), std::invalid_argument);
  auto s = AttributeSchema::uniform(3, 4);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.domain_size(2), 4);
  EXPECT_DOUBLE_EQ(s.cell_count(), 64.0);
  EXPECT_EQ(s.find("x1"), std::optional<std::size_t>(1));
}

TEST(Configuration, NextIsLexicographic) {
  auto s = AttributeSchema::with_domains({2, 3});
  Configuration c{0, 0};
  std::vector<Configuration> seen{c};
  while (next_configuration(s, c)) seen.push_back(c);
  ASSERT_EQ(seen.size(), 6u);
  EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
  EXPECT_EQ(seen.back(), (Configuration{1, 2}));
}

TEST(Structure, ValidatesRunningIntersection) {
  // a-b, c-d, b-c chain but the edge skips the element holding b.
  GaiStructure bad(4, {{0, 1}, {2, 3}, {1, 2}}, {{0, 1}, {1, 2}});
  auto v = validate_structure(bad);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.front().kind, ViolationKind::kRunningIntersection);

  GaiStructure good(4, {{0, 1}, {2, 3}, {1, 2}}, {{0, 2}, {1, 2}});
  EXPECT_TRUE(validate_structure(good).empty());
  EXPECT_EQ(good.connectivity(), 2u);
}

TEST(Structure, ReportsCoverageCycleAndBadEdges) {
  GaiStructure uncovered(3, {{0, 1}});
  auto v = validate_structure(uncovered);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, ViolationKind::kCoverage);

  GaiStructure cyc(3, {{0, 1}, {1, 2}, {0, 2}}, {{0, 1}, {1, 2}, {0, 2}});
  bool has_cycle = false;
  for (const auto& x : validate_structure(cyc)) has_cycle |= x.kind == ViolationKind::kCycle;
  EXPECT_TRUE(has_cycle);

  GaiStructure self(2, {{0}, {1}}, {{0, 0}});
  EXPECT_EQ(validate_structure(self).front().kind, ViolationKind::kBadEdge);

  GaiStructure split(3, {{0, 1}, {1, 2}});  // two trees sharing b
  EXPECT_EQ(validate_structure(split).front().kind, ViolationKind::kRunningIntersection);
}

TEST(Structure, ForestParameters) {
  GaiStructure s(5, {{0, 1}, {1, 2}, {3}, {4}}, {{0, 1}, {2, 3}});
  ASSERT_TRUE(validate_structure(s).empty());
  EXPECT_EQ(s.components().size(), 2u);
  EXPECT_EQ(s.tree_size(0), 2u);
  EXPECT_EQ(s.tree_size(1), 2u);
  EXPECT_EQ(s.connectivity(), 1u);
  EXPECT_EQ(GaiStructure::singletons(4).connectivity(), 0u);
}

TEST(Layout, ProjectionAndIds) {
  auto L = golden::abc_layout();
  EXPECT_EQ(L->total_size(), 8u);
  Configuration c{0, 1, 0};  // a1 b2 c1
  auto p0 = project(*L, c, 0);
  auto p1 = project(*L, c, 1);
  EXPECT_EQ(p0.assignment, (std::vector<Level>{0, 1}));
  EXPECT_EQ(p1.assignment, (std::vector<Level>{1, 0}));
  EXPECT_EQ(L->id(p0), 1u);
  EXPECT_EQ(L->id(p1), 6u);
  EXPECT_EQ(L->sub_configuration(6), p1);
  EXPECT_EQ(L->describe(1), "a=a1,b=b2");
  EXPECT_EQ(L->element_of(4), 1u);
}

TEST(GaiFunction, EvaluateMatchesTables) {
  auto L = golden::abc_layout();
  auto fb = golden::abc_buyer(L);
  EXPECT_DOUBLE_EQ(fb.evaluate({0, 1, 0}), 140.0);
  EXPECT_DOUBLE_EQ(fb.evaluate({1, 1, 0}), 155.0);
  EXPECT_DOUBLE_EQ(golden::abc_seller1(L).evaluate({0, 1, 0}), 95.0);
  EXPECT_DOUBLE_EQ(golden::abc_seller2(L).evaluate({0, 0, 0}), 90.0);
  EXPECT_THROW(GaiFunction(L, std::vector<double>(7, 0.0)), std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[3] = std::nan("");
  EXPECT_THROW(GaiFunction(L, bad), std::invalid_argument);
}

TEST(GaiFunction, EvaluateMatchesOracleOnRandomForests) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_forest(1 + rng.below(5), 3, 2, 0.2, rng);
    ASSERT_TRUE(validate_structure(s).empty());
    auto L = make_layout(AttributeSchema::uniform(s.attribute_count(), 2 + static_cast<int>(rng.below(2))), s);
    auto f = oracle::random_function(L, rng, false);
    for (const auto& c : oracle::all_configurations(L->schema()))
      ASSERT_NEAR(f.evaluate(c), oracle::value(f, c), 1e-9);
  }
}

TEST(Compose, ConsistentCoverAndConflict) {
  auto L = golden::abc_layout();
  std::vector<SubConfiguration> ok{{0, {0, 1}}, {1, {1, 0}}};
  auto r = compose(*L, ok);
  ASSERT_TRUE(std::holds_alternative<Configuration>(r));
  EXPECT_EQ(std::get<Configuration>(r), (Configuration{0, 1, 0}));

  std::vector<SubConfiguration> clash{{0, {0, 1}}, {1, {0, 0}}};
  auto r2 = compose(*L, clash);
  ASSERT_TRUE(std::holds_alternative<CoverConflict>(r2));
  EXPECT_EQ(std::get<CoverConflict>(r2).attribute, 1u);

  std::vector<SubConfiguration> missing{{0, {0, 1}}};
  EXPECT_THROW(compose(*L, missing), std::invalid_argument);
}

TEST(Compose, RoundTripsProjections) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto s = random_forest(1 + rng.below(5), 3, 2, 0.3, rng);
    auto L = make_layout(AttributeSchema::uniform(s.attribute_count(), 3), s);
    Configuration c(std::vector<Level>(s.attribute_count()));
    for (auto& l : c.levels) l = static_cast<Level>(rng.below(3));
    std::vector<SubConfiguration> subs;
    for (std::size_t r = 0; r < L->element_count(); ++r) subs.push_back(project(*L, c, r));
    std::reverse(subs.begin(), subs.end());
    auto back = compose(*L, subs);
    ASSERT_TRUE(std::holds_alternative<Configuration>(back));
    EXPECT_EQ(std::get<Configuration>(back), c);
  }
}

TEST(Tabular, CapAndIndexing) {
  auto f = golden::chain_function();
  EXPECT_EQ(f.index({1, 0, 1}), 5u);
  EXPECT_EQ(f.decode(6), (Configuration{1, 1, 0}));
  EXPECT_DOUBLE_EQ(f({1, 1, 1}), 11.0);
  EXPECT_THROW(TabularFunction(AttributeSchema::uniform(21, 2), {}), std::length_error);
  EXPECT_THROW(TabularFunction(AttributeSchema::uniform(3, 2), std::vector<double>(7)),
               std::invalid_argument);

  auto L = golden::abc_layout();
  auto t = TabularFunction::from(golden::abc_buyer(L));
  EXPECT_DOUBLE_EQ(t({0, 1, 0}), 140.0);
}
