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
#include <gaiauction/random.hpp>
#include <gaiauction/utility_gen.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace gaiauction;

TEST(Fopi, SortsTwoByTwo) {
  auto t = enforce_fopi({0.9, 0.1, 0.2, 0.8}, {2, 2});
  EXPECT_EQ(t, (std::vector<double>{0.1, 0.8, 0.2, 0.9}));
  std::vector<double> mono{0.0, 1.0, 2.0, 3.0};
  EXPECT_EQ(enforce_fopi(mono, {2, 2}), mono);
}

TEST(Fopi, RandomTablesBecomeMonotone) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> radix(1 + rng.below(4));
    std::size_t size = 1;
    for (int& d : radix) {
      d = 2 + static_cast<int>(rng.below(3));
      size *= static_cast<std::size_t>(d);
    }
    std::vector<double> t(size);
    for (double& x : t) x = rng.uniform();
    auto out = enforce_fopi(t, radix);
    EXPECT_TRUE(is_monotone(out, radix));
    std::sort(t.begin(), t.end());
    auto sorted = out;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, t);
  }
}

TEST(Mui, SolveFactor) {
  EXPECT_FALSE(solve_mui_factor({0.5, 0.5}));
  EXPECT_NEAR(*solve_mui_factor({0.4, 0.4}), 1.25, 1e-12);
  EXPECT_NEAR(*solve_mui_factor({0.6, 0.6}), -5.0 / 9.0, 1e-12);
  EXPECT_THROW(solve_mui_factor({0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(solve_mui_factor({0.3}), std::invalid_argument);
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ks(2 + rng.below(4));
    for (double& k : ks) k = 0.01 + 0.98 * rng.uniform();
    auto k = solve_mui_factor(ks);
    ASSERT_TRUE(k);
    EXPECT_LT(mui_residual(*k, ks), 1e-9);
    double sum = 0.0;
    for (double x : ks) sum += x;
    EXPECT_EQ(*k > 0.0, sum < 1.0);
  }
}

TEST(Mui, TableFormula) {
  MuiElement e;
  e.single = {{0.0, 1.0}, {0.0, 1.0}};
  e.scaling = {0.4, 0.4};
  e.k = 1.25;
  auto t = mui_table(e, {2, 2});
  EXPECT_DOUBLE_EQ(t[0], 0.0);
  EXPECT_NEAR(t[3], 1.0, 1e-12);
  EXPECT_NEAR(t[1], 0.4, 1e-12);
}

TEST(Mui, GeneratedElementsHaveRequestedInteraction) {
  Rng rng(5);
  for (double k : {-0.5, -0.2, 0.5, 1.0, 2.0, 5.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> radix(2 + rng.below(3));
      for (int& d : radix) d = 2 + static_cast<int>(rng.below(3));
      auto e = gen_mui_subutility(radix, k, rng);
      EXPECT_NEAR(e.k, k, 1e-6 * std::max(1.0, std::abs(k)));
      EXPECT_LT(mui_residual(e.k, e.scaling), 1e-9);
      EXPECT_EQ(interaction_violations(e.table, radix, k > 0 ? 1 : -1), 0u);
      EXPECT_GT(interaction_violations(e.table, radix, k > 0 ? -1 : 1), 0u);
      EXPECT_TRUE(is_monotone(e.table, radix));
      EXPECT_NEAR(e.table.front(), 0.0, 1e-12);
      EXPECT_NEAR(e.table.back(), 1.0, 1e-9);
    }
  }
  EXPECT_THROW(gen_mui_subutility({2, 2}, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(gen_mui_subutility({2, 2}, -1.5, rng), std::invalid_argument);
}

TEST(Interaction, AdditiveTableHasNeither) {
  std::vector<double> add{0, 1, 2, 3};  // u = 2a + b
  EXPECT_EQ(interaction_violations(add, {2, 2}, 1), 1u);
  EXPECT_EQ(interaction_violations(add, {2, 2}, -1), 1u);
}

TEST(Subutilities, SeparatorSlicesAreShared) {
  GaiStructure s(3, {{0, 1}, {1, 2}}, {{0, 1}});
  auto L = make_layout(AttributeSchema::uniform(3, 3), s);
  Rng rng(7);
  auto u = draw_subutilities(*L, GenMode::kRandom, 0.0, rng);
  // u1(a0, b_j) == u2(b_j, c0).
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(u[0][j], u[1][j * 3]);
  EXPECT_NE(u[0][1 * 3], u[1][1]);
}

TEST(Subutilities, ConstituentsReconstructWeightedSum) {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    auto s = random_forest(1 + rng.below(4), 3, 2, 0.2, rng);
    auto L = make_layout(AttributeSchema::uniform(s.attribute_count(), 3), s);
    if (L->schema().cell_count() > 20000) continue;
    GenSpec spec;
    spec.seed = rng.next();
    auto t = generate_trader_detailed(L, spec);
    // Brute-force tabular build of sum lambda_r f_r, then the same affine map.
    std::vector<double> raw;
    for (const auto& c : oracle::all_configurations(L->schema())) {
      double v = 0.0;
      for (std::size_t r = 0; r < L->element_count(); ++r) {
        const std::size_t local = oracle::sub_id(*L, r, c) - L->element(r).offset;
        v += t.lambdas[r] * t.constituents[r][local];
      }
      raw.push_back(v);
    }
    const double lo = *std::min_element(raw.begin(), raw.end());
    const double hi = *std::max_element(raw.begin(), raw.end());
    std::size_t i = 0;
    for (const auto& c : oracle::all_configurations(L->schema())) {
      const double want = 300.0 + 400.0 * (raw[i++] - lo) / (hi - lo);
      EXPECT_NEAR(t.function.evaluate(c), want, 1e-9);
    }
  }
}

TEST(Subutilities, ConstituentOfChainSubtractsSeparatorSlice) {
  GaiStructure s(3, {{0, 1}, {1, 2}}, {{0, 1}});
  auto L = make_layout(AttributeSchema::uniform(3, 2), s);
  std::vector<std::vector<double>> u{{0.1, 0.2, 0.3, 0.4}, {0.2, 0.5, 0.4, 0.9}};
  auto f = constituents(u, *L);
  EXPECT_EQ(f[0], u[0]);
  std::vector<double> want{0.0, 0.3, 0.0, 0.5};
  for (std::size_t x = 0; x < 4; ++x) EXPECT_NEAR(f[1][x], want[x], 1e-15);
}

TEST(Lambdas, OnSimplexWithUniformMean) {
  Rng rng(11);
  EXPECT_EQ(draw_lambdas(1, rng), std::vector<double>{1.0});
  const std::size_t g = 4;
  std::vector<double> mean(g, 0.0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto l = draw_lambdas(g, rng);
    double sum = 0.0;
    for (std::size_t r = 0; r < g; ++r) {
      EXPECT_GE(l[r], 0.0);
      sum += l[r];
      mean[r] += l[r] / n;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  for (double m : mean) EXPECT_NEAR(m, 0.25, 0.01);
}

TEST(Trader, ScaledRangeAndDeterminism) {
  auto L = make_layout(AttributeSchema::uniform(7, 3), tree_structure({3, 3, 1, 3, 0}));
  for (GenMode mode : {GenMode::kRandom, GenMode::kFopi, GenMode::kMui}) {
    GenSpec spec{mode, 1.0, 500.0, 200.0, 42};
    auto f = generate_trader(L, spec);
    auto [lo, hi] = min_max_range(f);
    EXPECT_NEAR(lo, 300.0, 1e-9);
    EXPECT_NEAR(hi, 700.0, 1e-9);
    auto g = generate_trader(L, spec);
    EXPECT_EQ(std::vector<double>(f.values().begin(), f.values().end()),
              std::vector<double>(g.values().begin(), g.values().end()));
  }
  GaiFunction flat(L, std::vector<double>(L->total_size(), 1.0));
  EXPECT_THROW(scale_trader(flat, 500.0, 200.0), std::invalid_argument);
  auto id = make_layout(AttributeSchema::uniform(1, 2), GaiStructure::singletons(1));
  auto same = scale_trader(GaiFunction(id, {300.0, 700.0}), 500.0, 200.0);
  EXPECT_DOUBLE_EQ(same.at(0), 300.0);
  EXPECT_DOUBLE_EQ(same.at(1), 700.0);
}

TEST(Trader, FopiTraderIsMonotoneEverywhere) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_forest(1 + rng.below(4), 3, 2, 0.2, rng);
    auto L = make_layout(AttributeSchema::uniform(s.attribute_count(), 3), s);
    if (L->schema().cell_count() > 20000) continue;
    auto f = generate_trader(L, GenSpec{GenMode::kFopi, 0.0, 500.0, 200.0, rng.next()});
    const auto& schema = L->schema();
    for (const auto& c : oracle::all_configurations(schema))
      for (std::size_t a = 0; a < schema.size(); ++a) {
        if (c[a] + 1 >= schema.domain_size(a)) continue;
        Configuration up = c;
        up.levels[a] += 1;
        EXPECT_GE(f.evaluate(up), f.evaluate(c) - 1e-9);
      }
  }
}

TEST(Shapes, TreeStructure) {
  auto s = tree_structure({5, 3, 1, 3, 0});
  EXPECT_TRUE(validate_structure(s).empty());
  EXPECT_EQ(s.element_count(), 5u);
  EXPECT_EQ(s.connectivity(), 4u);
  EXPECT_EQ(s.max_element_size(), 3u);
  EXPECT_EQ(s.attribute_count(), 11u);
  auto singles = tree_structure({4, 1, 1, 3, 0});
  EXPECT_TRUE(validate_structure(singles).empty());
  EXPECT_EQ(singles.attribute_count(), 4u);
}
