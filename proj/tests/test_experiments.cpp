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

#include <gaiauction/experiments.hpp>

#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace gaiauction;

namespace {

std::vector<double> vals(const GaiFunction& f) { return {f.values().begin(), f.values().end()}; }

Scenario small_scenario() {
  Scenario s;
  s.name = "small";
  s.seed = 77;
  s.trials = 4;
  s.sellers = 3;
  s.domain = 2;
  s.shape = TreeShape{3, 2, 1, 3, 0};
  return s;
}

double binomial_two_sided(std::size_t a, std::size_t b) {
  // Direct sum of C(n, i) / 2^n.
  const std::size_t n = a + b, k = std::min(a, b);
  double c = 1.0, tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i) {
    if (i > 0) c = c * static_cast<double>(n - i + 1) / static_cast<double>(i);
    tail += c;
  }
  return std::min(1.0, 2.0 * tail / std::pow(2.0, static_cast<double>(n)));
}

}  // namespace

TEST(Scenario, CellOverrides) {
  Scenario s = small_scenario();
  s.axis = SweepAxis::kXi;
  EXPECT_EQ(cell_scenario(s, 4).shape.element_size, 4u);
  s.axis = SweepAxis::kE;
  EXPECT_EQ(cell_scenario(s, 5).shape.elements, 6u);
  EXPECT_EQ(scenario_structure(cell_scenario(s, 5)).connectivity(), 5u);
  s.axis = SweepAxis::kK;
  EXPECT_DOUBLE_EQ(cell_scenario(s, -0.5).mui_k, -0.5);
  s.axis = SweepAxis::kSamples;
  EXPECT_EQ(cell_scenario(s, 50).ap_samples, 50u);
  EXPECT_THROW(cell_scenario(s, 2.5), std::invalid_argument);
  s.axis = SweepAxis::kDelta;
  EXPECT_THROW(cell_scenario(s, 0.0), std::invalid_argument);
}

TEST(Scenario, JsonRoundTripAndValidation) {
  Scenario s = small_scenario();
  s.mode = GenMode::kMui;
  s.mui_k = 1.5;
  s.axis = SweepAxis::kSamples;
  s.values = {20, 40};
  s.eps = 5.0;
  auto back = scenario_from_json(to_json(s));
  EXPECT_EQ(to_json(back).dump(), to_json(s).dump());

  auto j = to_json(small_scenario());
  j["utility"]["mode"] = "mui";
  j["utility"]["k"] = 0.0;
  EXPECT_THROW(scenario_from_json(j), std::invalid_argument);
  j = to_json(small_scenario());
  j["sweep"] = {{"axis", "xi"}};
  EXPECT_THROW(scenario_from_json(j), std::invalid_argument);
  j = to_json(small_scenario());
  j["format"] = "other/1";
  EXPECT_THROW(scenario_from_json(j), std::invalid_argument);

  j = to_json(small_scenario());
  j["structure"] = to_json(GaiStructure(3, {{0, 1}, {1, 2}}, {{0, 1}}));
  auto explicit_s = scenario_from_json(j);
  ASSERT_TRUE(explicit_s.structure);
  EXPECT_EQ(explicit_s.structure->element_count(), 2u);
}

TEST(Trials, InstancesDependOnSeedAndTrialOnly) {
  Scenario s = small_scenario();
  auto a = make_instance(s, 2);
  auto b = make_instance(s, 2);
  EXPECT_EQ(vals(a.buyer), vals(b.buyer));
  ASSERT_EQ(a.costs.size(), 3u);
  EXPECT_EQ(vals(a.costs[1]), vals(b.costs[1]));
  EXPECT_NE(vals(make_instance(s, 3).buyer), vals(a.buyer));
  // Changing the sample size leaves the traders untouched.
  s.ap_samples = 17;
  EXPECT_EQ(vals(make_instance(s, 2).costs[2]), vals(a.costs[2]));
}

TEST(Trials, PairedModesShareTheOptimum) {
  Scenario s = small_scenario();
  for (std::size_t t = 0; t < s.trials; ++t) {
    auto runs = run_trial(s, t);
    ASSERT_EQ(runs.size(), 2u);
    EXPECT_EQ(runs[0].metrics.seed, runs[1].metrics.seed);
    EXPECT_EQ(runs[0].metrics.map_surplus, runs[1].metrics.map_surplus);
    EXPECT_EQ(runs[1].metrics.connectivity, 0u);

    // Optimum against direct enumeration.
    auto inst = make_instance(s, t);
    double best = -1e300;
    for (const auto& c : oracle::all_configurations(inst.buyer.schema()))
      for (const auto& cost : inst.costs)
        best = std::max(best, oracle::value(inst.buyer, c) - oracle::value(cost, c));
    EXPECT_NEAR(runs[0].metrics.map_surplus, best, 1e-9);
    for (const auto& r : runs)
      if (!r.metrics.flagged) {
        EXPECT_LE(r.metrics.efficiency, 1.0 + 1e-9);
      }
  }
}

TEST(Revelation, TrivialAndWorkedExample) {
  auto L = golden::abc_layout();
  AuctionTrace t;
  t.revealed.assign(8, 0);
  auto none = revelation_fraction(t, *L);
  EXPECT_EQ(none.per_element, (std::vector<double>{0.0, 0.0}));
  t.revealed.assign(8, 1);
  EXPECT_DOUBLE_EQ(revelation_fraction(t, *L).mean, 1.0);
  t.revealed.assign(7, 1);
  EXPECT_THROW(revelation_fraction(t, *L), std::invalid_argument);

  AuctionTrace golden_trace;
  replay_golden(&golden_trace);
  // Recount from the rounds: bid while preferred.
  std::vector<char> want(8, 0);
  for (const auto& rec : golden_trace.rounds) {
    if (rec.phase != Phase::kA) continue;
    for (const auto& bid : rec.bids)
      for (SubConfigId id : bid)
        if (std::count(rec.preferred.begin(), rec.preferred.end(), id)) want[id] = 1;
  }
  EXPECT_EQ(golden_trace.revealed, want);
  auto rep = revelation_fraction(golden_trace, *L);
  EXPECT_EQ(rep.per_element, (std::vector<double>{0.5, 0.5}));
}

TEST(SignTest, MatchesBinomialSums) {
  for (auto [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{
           {5, 0}, {10, 0}, {7, 3}, {30, 12}, {50, 50}, {0, 0}, {1, 90}})
    EXPECT_NEAR(sign_test_p(a, b), binomial_two_sided(a, b), 1e-12) << a << " " << b;
  EXPECT_DOUBLE_EQ(sign_test_p(5, 0), 0.0625);
}

TEST(Summary, AggregatesAndPairs) {
  std::vector<TrialMetrics> rows;
  auto add = [&](Pricing p, std::size_t trial, double eff, bool flagged) {
    TrialMetrics m;
    m.pricing = p;
    m.trial = trial;
    m.efficiency = flagged ? std::nan("") : eff;
    m.flagged = flagged;
    m.rounds = 10;
    m.traded = true;
    rows.push_back(m);
  };
  add(Pricing::kGai, 0, 1.0, false);
  add(Pricing::kAp, 0, 0.8, false);
  add(Pricing::kGai, 1, 0.9, false);
  add(Pricing::kAp, 1, 0.9, false);
  add(Pricing::kGai, 2, 0.0, true);
  add(Pricing::kAp, 2, 0.0, true);
  auto c = summarize_cell(0, 3.0, rows);
  EXPECT_EQ(c.modes[Pricing::kGai].counted, 2u);
  EXPECT_NEAR(c.modes[Pricing::kGai].efficiency, 0.95, 1e-12);
  EXPECT_NEAR(c.modes[Pricing::kAp].efficiency, 0.85, 1e-12);
  EXPECT_EQ(c.pairs, 2u);
  EXPECT_EQ(c.gai_wins, 1u);
  EXPECT_EQ(c.ap_wins, 0u);
  EXPECT_NEAR(c.mean_difference, 0.1, 1e-12);
  EXPECT_FALSE(c.significant);
}

TEST(Sweep, CsvIsDeterministicAndReadable) {
  Scenario s = small_scenario();
  s.axis = SweepAxis::kSamples;
  s.values = {10, 40};
  auto render = [&] {
    auto r = run_sweep(s);
    std::ostringstream m, sum;
    write_metrics_csv(m, r);
    write_summary_csv(sum, r);
    return std::make_pair(m.str(), sum.str());
  };
  auto first = render();
  EXPECT_EQ(first, render());
  std::istringstream in(first.second);
  auto back = read_summary_csv(in);
  ASSERT_EQ(back.cells.size(), 2u);
  EXPECT_EQ(back.scenario.axis, SweepAxis::kSamples);
  auto tables = plot_tables(back);
  ASSERT_EQ(tables.size(), 4u);
  EXPECT_EQ(tables[0].name, "efficiency_vs_samples");
  EXPECT_EQ(tables[0].header, (std::vector<std::string>{"samples", "gai", "ap"}));
  EXPECT_EQ(tables[0].rows[1][0], 40.0);
  // metrics.csv: header plus trials x cells x modes rows.
  EXPECT_EQ(std::count(first.first.begin(), first.first.end(), '\n'), 1 + 4 * 2 * 2);
}

TEST(Golden, EveryAnchorPasses) {
  for (const auto& a : replay_golden()) EXPECT_TRUE(a.passed) << a.name << ": " << a.detail;
}

TEST(Json, TraceDocument) {
  AuctionTrace t;
  auto L = golden::abc_layout();
  replay_golden(&t);
  auto j = to_json(t, *L);
  EXPECT_EQ(j["format"], kTraceFormat);
  EXPECT_EQ(j["phase_a_rounds"], 9);
  EXPECT_EQ(j["outcome"]["payment"], 109.0);
  EXPECT_EQ(j["rounds"].size(), 15u);
  EXPECT_EQ(outcome_summary(t, L->schema()),
            "case 4: seller 0 supplies a=a1 b=b2 c=c1 for 109 after 15 rounds");

  auto f = golden::abc_buyer(L);
  auto back = function_from_json(to_json(f));
  EXPECT_EQ(vals(back), vals(f));
  EXPECT_EQ(back.layout().structure().elements(), f.layout().structure().elements());
  auto cfg = auction_config_from_json(Json{{"eps", 8}, {"delta", 4}});
  EXPECT_DOUBLE_EQ(cfg.eps, 8.0);
}
