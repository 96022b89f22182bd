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

#include <gaiauction/gai_optim.hpp>
#include <gaiauction/golden.hpp>
#include <gaiauction/random.hpp>
#include <gaiauction/utility_gen.hpp>

#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"

using namespace gaiauction;

namespace {

struct Instance {
  LayoutPtr layout;
  GaiFunction f;
};

Instance random_instance(Rng& rng, bool integers, std::size_t max_cells = 4096) {
  for (;;) {
    auto s = random_forest(1 + rng.below(5), 3, 2, 0.25, rng);
    auto schema = AttributeSchema::uniform(s.attribute_count(), 2 + static_cast<int>(rng.below(3)));
    if (schema.cell_count() > static_cast<double>(max_cells)) continue;
    auto L = make_layout(schema, s);
    // Small integer ranges make ties common.
    return {L, oracle::random_function(L, rng, integers, 0.0, integers ? 4.0 : 100.0)};
  }
}

}  // namespace

TEST(MaxAssignment, WorkedExampleBuyer) {
  auto L = golden::abc_layout();
  auto a = max_assignment(golden::abc_buyer(L));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->config, (Configuration{1, 1, 0}));
  EXPECT_DOUBLE_EQ(a->value, 155.0);
  auto [lo, hi] = min_max_range(golden::abc_buyer(L));
  EXPECT_DOUBLE_EQ(lo, 100.0);
  EXPECT_DOUBLE_EQ(hi, 155.0);
}

TEST(MaxAssignment, MatchesBruteForceWithTies) {
  Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_instance(rng, trial % 2 == 0);
    auto got = max_assignment(inst.f);
    auto want = oracle::argmax(inst.layout->schema(),
                               [&](const Configuration& c) { return oracle::value(inst.f, c); });
    ASSERT_TRUE(got);
    EXPECT_NEAR(got->value, want.value, 1e-9);
    EXPECT_EQ(got->config, want.config) << "trial " << trial;
  }
}

TEST(MaxAssignment, RespectsMask) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_instance(rng, true);
    ElementMask mask(*inst.layout);
    for (SubConfigId id = 0; id < inst.layout->total_size(); ++id)
      if (rng.uniform() < 0.3) mask.forbid(id);
    auto keep = [&](const Configuration& c) {
      for (std::size_t r = 0; r < inst.layout->element_count(); ++r)
        if (!mask.permitted(oracle::sub_id(*inst.layout, r, c))) return false;
      return true;
    };
    auto want = oracle::argmax(inst.layout->schema(),
                               [&](const Configuration& c) { return oracle::value(inst.f, c); }, keep);
    auto got = max_assignment(inst.f, &mask);
    if (want.config.size() == 0) {
      EXPECT_FALSE(got);
    } else {
      ASSERT_TRUE(got);
      EXPECT_EQ(got->config, want.config);
      EXPECT_NEAR(got->value, want.value, 1e-9);
    }
  }
}

TEST(MinMax, MatchesBruteForce) {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, false);
    double lo = 1e300, hi = -1e300;
    for (const auto& c : oracle::all_configurations(inst.layout->schema())) {
      lo = std::min(lo, oracle::value(inst.f, c));
      hi = std::max(hi, oracle::value(inst.f, c));
    }
    auto [a, b] = min_max_range(inst.f);
    EXPECT_NEAR(a, lo, 1e-9);
    EXPECT_NEAR(b, hi, 1e-9);
  }
}

TEST(MaxMarginals, MatchBruteForce) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(rng, false);
    Eliminator elim(*inst.layout);
    auto mm = elim.max_marginals(inst.f.values());
    std::vector<double> want(inst.layout->total_size(), -1e300);
    for (const auto& c : oracle::all_configurations(inst.layout->schema()))
      for (std::size_t r = 0; r < inst.layout->element_count(); ++r) {
        auto id = oracle::sub_id(*inst.layout, r, c);
        want[id] = std::max(want[id], oracle::value(inst.f, c));
      }
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(mm[i], want[i], 1e-9);
  }
}

TEST(NextBest, EnumeratesInValueOrderWithoutRepeats) {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto inst = random_instance(rng, trial % 3 == 0, 512);
    const auto& L = *inst.layout;
    PreferredSet acc(L);
    std::set<Configuration> seen;
    std::vector<double> values;
    WorkCounter counter;
    for (;;) {
      auto next = next_best_outside(inst.f, acc, &counter);
      if (!next) break;
      // The result is the best configuration outside the accumulated set.
      auto want = oracle::argmax(
          L.schema(), [&](const Configuration& c) { return oracle::value(inst.f, c); },
          [&](const Configuration& c) {
            for (std::size_t r = 0; r < L.element_count(); ++r)
              if (!acc.contains(oracle::sub_id(L, r, c))) return true;
            return false;
          });
      ASSERT_EQ(next->config, want.config);
      ASSERT_NEAR(next->value, want.value, 1e-9);
      EXPECT_TRUE(seen.insert(next->config).second);
      values.push_back(next->value);
      for (std::size_t r = 0; r < L.element_count(); ++r) acc.member[L.id(r, next->config)] = 1;
    }
    EXPECT_TRUE(std::is_sorted(values.rbegin(), values.rend(),
                               [](double a, double b) { return a < b - 1e-9; }));
    EXPECT_EQ(acc.size(), L.total_size());
    EXPECT_LE(counter.next_best_calls, L.total_size() + 1);
  }
}

TEST(PreferredSet, FirstRoundOfWorkedExample) {
  auto L = golden::abc_layout();
  auto fb = golden::abc_buyer(L);
  std::vector<double> profit(fb.values().begin(), fb.values().end());
  for (std::size_t i = 0; i < 4; ++i) profit[i] -= 75;
  for (std::size_t i = 4; i < 8; ++i) profit[i] -= 90;
  Eliminator elim(*L);
  auto ps = buyer_preferred_set(elim, profit, 8.0, PreferredSet(*L));
  // Only a2b2c1 (profit -10) lies within 8 of the maximum.
  EXPECT_EQ(ps.ids(), (std::vector<SubConfigId>{3, 6}));
  EXPECT_DOUBLE_EQ(ps.tree_max[0], -10.0);
}

TEST(PreferredSet, SoundAndCompleteAgainstBruteForce) {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_instance(rng, trial % 2 == 0);
    const auto& L = *inst.layout;
    const double eps = 1.0 + rng.uniform() * 20.0;
    auto ps = buyer_preferred_set(inst.f, eps);
    const auto& st = L.structure();
    const double g = static_cast<double>(L.element_count());
    std::vector<char> want(L.total_size(), 0);
    for (std::size_t j = 0; j < st.components().size(); ++j) {
      // Tree value of each configuration; all configurations restricted to
      // the tree's attributes are enumerated through Theta.
      auto tree_value = [&](const Configuration& c) {
        double v = 0.0;
        for (std::size_t r : st.components()[j]) v += inst.f.at(oracle::sub_id(L, r, c));
        return v;
      };
      double top = -1e300;
      auto all = oracle::all_configurations(L.schema());
      for (const auto& c : all) top = std::max(top, tree_value(c));
      const double thr = top - static_cast<double>(st.tree_size(j)) * eps / g;
      for (const auto& c : all)
        if (tree_value(c) >= thr - 1e-9)
          for (std::size_t r : st.components()[j]) want[oracle::sub_id(L, r, c)] = 1;
    }
    EXPECT_EQ(ps.member, want) << "trial " << trial;
  }
}

TEST(PreferredSet, GrowsFromPrevious) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto inst = random_instance(rng, false);
    auto small = buyer_preferred_set(inst.f, 2.0);
    auto big = buyer_preferred_set(inst.f, 10.0, small);
    auto fresh = buyer_preferred_set(inst.f, 10.0);
    for (std::size_t i = 0; i < small.member.size(); ++i)
      EXPECT_TRUE(!small.member[i] || big.member[i]);
    EXPECT_EQ(big.member, fresh.member);
  }
}

TEST(Cover, ExistsCoverIn) {
  auto L = golden::abc_layout();
  PreferredSet ps(*L);
  ps.member[3] = ps.member[6] = 1;  // a2b2, b2c1
  EXPECT_TRUE(exists_cover_in(*L, ps, {3, 6}));
  EXPECT_FALSE(exists_cover_in(*L, ps, {2, 4}));
  EXPECT_FALSE(exists_cover_in(*L, ps, {3, 4}));  // a2b2 with b1c1 is no cover
}

TEST(FactorMap, LiftsIntoCoarserLayout) {
  auto schema = AttributeSchema::uniform(3, 3);
  auto fine = make_layout(schema, GaiStructure::singletons(3));
  auto coarse = make_layout(schema, GaiStructure(3, {{0, 1, 2}}));
  Rng rng(2);
  auto f = oracle::random_function(fine, rng, false);
  std::vector<double> host(coarse->total_size(), 0.0);
  FactorMap(*fine, *coarse).accumulate(f.values(), 2.0, host);
  GaiFunction lifted(coarse, host);
  for (const auto& c : oracle::all_configurations(schema))
    EXPECT_NEAR(lifted.evaluate(c), 2.0 * f.evaluate(c), 1e-9);
  EXPECT_TRUE(FactorMap::fits(fine->structure(), coarse->structure()));
  EXPECT_FALSE(FactorMap::fits(coarse->structure(), fine->structure()));
}
