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

#ifndef GAIAUCTION_EXPERIMENTS_HPP
#define GAIAUCTION_EXPERIMENTS_HPP

/// \file experiments.hpp
///
/// Scenario files, paired GAI/additive trials, sweeps, CSV outputs and the
/// worked-example replay.
///
/// A trial draws one buyer and m seller cost functions from per-trial seeds
/// and runs the auction once per pricing mode on exactly those functions:
/// GAI pricing uses the buyer's own structure, AP pricing a least-squares
/// additive fit of the buyer's utility.  Efficiency is always measured with
/// the true buyer utility.

#include <gaiauction/additive_approx.hpp>
#include <gaiauction/auction_engine.hpp>
#include <gaiauction/bidders.hpp>
#include <gaiauction/golden.hpp>
#include <gaiauction/json_io.hpp>
#include <gaiauction/random.hpp>
#include <gaiauction/utility_gen.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace gaiauction {

inline constexpr const char* kScenarioFormat = "gai-scenario/1";

enum class Pricing { kGai, kAp };

inline std::string to_string(Pricing p) { return p == Pricing::kGai ? "gai" : "ap"; }

inline Pricing pricing_from_string(const std::string& s) {
  if (s == "gai") return Pricing::kGai;
  if (s == "ap") return Pricing::kAp;
  throw std::invalid_argument("unknown pricing mode: " + s);
}

enum class SweepAxis { kNone, kXi, kE, kK, kDelta, kSamples };

inline std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::kNone: return "none";
    case SweepAxis::kXi: return "xi";
    case SweepAxis::kE: return "e";
    case SweepAxis::kK: return "k";
    case SweepAxis::kDelta: return "delta";
    case SweepAxis::kSamples: return "samples";
  }
  return "none";
}

inline SweepAxis sweep_axis_from_string(const std::string& s) {
  for (SweepAxis a : {SweepAxis::kNone, SweepAxis::kXi, SweepAxis::kE, SweepAxis::kK,
                      SweepAxis::kDelta, SweepAxis::kSamples})
    if (to_string(a) == s) return a;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t sellers = 5;
  int domain = 3;
  TreeShape shape{6, 3, 1, 3, 0};
  /// Explicit structure; overrides shape (and rules out xi / e sweeps).
  std::optional<GaiStructure> structure;
  GenMode mode = GenMode::kRandom;
  double mui_k = 0.0;
  double buyer_mean = 500.0;
  double seller_mean_lo = 500.0;
  double seller_mean_hi = 700.0;
  double sigma = 200.0;
  /// Per-sub-configuration decrement; eps = delta * g unless eps is set.
  double delta = 2.0;
  std::optional<double> eps;
  /// Initial price headroom; defaults to eps.
  std::optional<double> headroom;
  std::vector<Pricing> pricing{Pricing::kGai, Pricing::kAp};
  std::size_t ap_samples = 300;
  SweepAxis axis = SweepAxis::kNone;
  std::vector<double> values;
  /// Brute-force MAP cross-check up to this many configurations.
  double oracle_cells = 1e4;
  bool check_bounds = true;
};

/// The scenario of one sweep cell.
inline Scenario cell_scenario(const Scenario& s, double value) {
  Scenario c = s;
  auto as_count = [&](double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v))
      throw std::invalid_argument(std::string("sweep value for ") + what + " must be a whole number");
    return static_cast<std::size_t>(v);
  };
  switch (s.axis) {
    case SweepAxis::kNone: break;
    case SweepAxis::kXi:
      if (s.structure) throw std::invalid_argument("xi sweep needs a shape, not an explicit structure");
      c.shape.element_size = as_count(value, "xi");
      c.shape.root_size = 0;
      if (c.shape.element_size == 0) throw std::invalid_argument("xi must be positive");
      break;
    case SweepAxis::kE:
      if (s.structure) throw std::invalid_argument("e sweep needs a shape, not an explicit structure");
      c.shape.elements = as_count(value, "e") + 1;
      break;
    case SweepAxis::kK: c.mui_k = value; break;
    case SweepAxis::kDelta:
      if (!(value > 0.0)) throw std::invalid_argument("delta must be positive");
      c.delta = value;
      break;
    case SweepAxis::kSamples:
      c.ap_samples = as_count(value, "samples");
      if (c.ap_samples == 0) throw std::invalid_argument("sample size must be positive");
      break;
  }
  return c;
}

inline std::vector<double> sweep_values(const Scenario& s) {
  if (s.axis == SweepAxis::kNone) return {std::numeric_limits<double>::quiet_NaN()};
  if (s.values.empty()) throw std::invalid_argument("sweep axis set but no values given");
  return s.values;
}

inline GaiStructure scenario_structure(const Scenario& s) {
  if (s.structure) return *s.structure;
  return tree_structure(s.shape);
}

inline void validate(const Scenario& s) {
  if (s.sellers == 0) throw std::invalid_argument("scenario needs at least one seller");
  if (s.trials == 0) throw std::invalid_argument("scenario needs at least one trial");
  if (s.domain < 1) throw std::invalid_argument("domain size must be positive");
  if (!(s.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (s.seller_mean_hi < s.seller_mean_lo) throw std::invalid_argument("seller mean range is empty");
  if (s.pricing.empty()) throw std::invalid_argument("no pricing mode selected");
  for (double v : sweep_values(s)) {
    Scenario c = cell_scenario(s, v);
    auto st = scenario_structure(c);
    auto bad = validate_structure(st);
    if (!bad.empty()) throw std::invalid_argument("scenario structure: " + bad.front().message);
    if ((c.mode == GenMode::kMui || c.mode == GenMode::kMuiFopi) && c.mui_k == 0.0)
      throw std::invalid_argument("MUI modes need a nonzero k");
  }
}

// ---------------------------------------------------------------------------
// Scenario files

inline Scenario scenario_from_json(const Json& j) {
  expect_format(j, kScenarioFormat);
  Scenario s;
  s.name = j.value("name", s.name);
  s.seed = j.value("seed", s.seed);
  s.trials = j.value("trials", s.trials);
  s.sellers = j.value("sellers", s.sellers);
  s.domain = j.value("domain", s.domain);
  if (j.contains("structure")) {
    const auto& st = j.at("structure");
    if (st.contains("elements") && st.at("elements").is_array()) {
      s.structure = structure_from_json(st);
    } else {
      s.shape.elements = st.value("elements", s.shape.elements);
      s.shape.element_size = st.value("element_size", s.shape.element_size);
      s.shape.separator = st.value("separator", s.shape.separator);
      s.shape.max_children = st.value("max_children", s.shape.max_children);
      s.shape.root_size = st.value("root_size", s.shape.root_size);
    }
  }
  if (j.contains("utility")) {
    const auto& u = j.at("utility");
    s.mode = gen_mode_from_string(u.value("mode", to_string(s.mode)));
    s.mui_k = u.value("k", s.mui_k);
  }
  s.buyer_mean = j.value("buyer_mean", s.buyer_mean);
  if (j.contains("seller_mean")) {
    s.seller_mean_lo = j.at("seller_mean").at(0).get<double>();
    s.seller_mean_hi = j.at("seller_mean").at(1).get<double>();
  }
  s.sigma = j.value("sigma", s.sigma);
  if (j.contains("auction")) {
    const auto& a = j.at("auction");
    s.delta = a.value("delta", s.delta);
    if (a.contains("eps")) s.eps = a.at("eps").get<double>();
    if (a.contains("headroom")) s.headroom = a.at("headroom").get<double>();
  }
  if (j.contains("pricing")) {
    s.pricing.clear();
    for (const auto& p : j.at("pricing")) s.pricing.push_back(pricing_from_string(p.get<std::string>()));
  }
  s.ap_samples = j.value("ap_samples", s.ap_samples);
  if (j.contains("sweep")) {
    s.axis = sweep_axis_from_string(j.at("sweep").value("axis", std::string("none")));
    if (j.at("sweep").contains("values")) s.values = j.at("sweep").at("values").get<std::vector<double>>();
  }
  s.oracle_cells = j.value("oracle_cells", s.oracle_cells);
  validate(s);
  return s;
}

inline Json to_json(const Scenario& s) {
  Json j{{"format", kScenarioFormat}, {"name", s.name}, {"seed", s.seed}, {"trials", s.trials},
         {"sellers", s.sellers}, {"domain", s.domain}};
  if (s.structure) {
    j["structure"] = to_json(*s.structure);
  } else {
    j["structure"] = {{"elements", s.shape.elements}, {"element_size", s.shape.element_size},
                      {"separator", s.shape.separator}, {"max_children", s.shape.max_children},
                      {"root_size", s.shape.root_size}};
  }
  j["utility"] = {{"mode", to_string(s.mode)}, {"k", s.mui_k}};
  j["buyer_mean"] = s.buyer_mean;
  j["seller_mean"] = {s.seller_mean_lo, s.seller_mean_hi};
  j["sigma"] = s.sigma;
  Json a{{"delta", s.delta}};
  if (s.eps) a["eps"] = *s.eps;
  if (s.headroom) a["headroom"] = *s.headroom;
  j["auction"] = a;
  Json p = Json::array();
  for (Pricing x : s.pricing) p.push_back(to_string(x));
  j["pricing"] = p;
  j["ap_samples"] = s.ap_samples;
  j["sweep"] = {{"axis", to_string(s.axis)}, {"values", s.values}};
  j["oracle_cells"] = s.oracle_cells;
  return j;
}

// ---------------------------------------------------------------------------
// Trials

/// Traders of one trial; shared by every pricing mode.
struct TrialInstance {
  std::uint64_t seed = 0;
  LayoutPtr layout;
  GaiFunction buyer;
  std::vector<GaiFunction> costs;
};

inline std::uint64_t trial_seed(const Scenario& s, std::size_t trial) {
  return derive_seed(s.seed, trial, 0);
}

/// Trader draws depend only on the scenario seed and the trial index, so
/// every sweep cell and every pricing mode sees the same random streams.
inline TrialInstance make_instance(const Scenario& s, std::size_t trial) {
  TrialInstance inst;
  inst.seed = trial_seed(s, trial);
  auto st = scenario_structure(s);
  inst.layout = make_layout(AttributeSchema::uniform(st.attribute_count(), s.domain), st);
  inst.buyer = generate_trader(inst.layout, GenSpec{s.mode, s.mui_k, s.buyer_mean, s.sigma,
                                                    derive_seed(inst.seed, 0, 0)});
  for (std::size_t i = 0; i < s.sellers; ++i) {
    Rng mean_rng(derive_seed(inst.seed, 2, i));
    const double mean = mean_rng.uniform(s.seller_mean_lo, s.seller_mean_hi);
    inst.costs.push_back(generate_trader(
        inst.layout, GenSpec{s.mode, s.mui_k, mean, s.sigma, derive_seed(inst.seed, 1, i)}));
  }
  return inst;
}

struct RevelationReport {
  std::vector<double> per_element;
  double mean = 0.0;
};

/// Per element, the fraction of its sub-configurations bid by some seller
/// while in the buyer-preferred set; and the mean over elements.
inline RevelationReport revelation_fraction(const AuctionTrace& t, const GaiLayout& layout) {
  RevelationReport r;
  if (t.revealed.size() != layout.total_size())
    throw std::invalid_argument("revelation_fraction: trace does not match layout");
  for (std::size_t e = 0; e < layout.element_count(); ++e) {
    const auto& el = layout.element(e);
    std::size_t n = 0;
    for (std::size_t x = 0; x < el.size; ++x) n += t.revealed[el.offset + x] ? 1 : 0;
    r.per_element.push_back(static_cast<double>(n) / static_cast<double>(el.size));
    r.mean += r.per_element.back();
  }
  if (!r.per_element.empty()) r.mean /= static_cast<double>(r.per_element.size());
  return r;
}

struct TrialMetrics {
  std::size_t cell = 0;
  double axis_value = std::numeric_limits<double>::quiet_NaN();
  Pricing pricing = Pricing::kGai;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  /// Achieved / optimal surplus under the true buyer utility; NaN when the
  /// optimal surplus is not positive (flagged trial).
  double efficiency = std::numeric_limits<double>::quiet_NaN();
  double surplus = 0.0;
  double map_surplus = 0.0;
  std::size_t rounds = 0;
  std::size_t phase_a_rounds = 0;
  double revelation = 0.0;
  bool traded = false;
  double payment = std::numeric_limits<double>::quiet_NaN();
  double vcg_payment = std::numeric_limits<double>::quiet_NaN();
  int termination_case = 1;
  double eps = 0.0;
  double delta = 0.0;
  std::size_t connectivity = 0;
  bool flagged = false;
};

struct TrialRun {
  TrialMetrics metrics;
  AuctionTrace trace;
  LayoutPtr price_layout;
};

/// Best seller-configuration surplus by elimination; cross-checked against
/// exhaustive enumeration on small domains.
inline MapSolution checked_map_optimum(const GaiFunction& buyer,
                                       std::span<const GaiFunction> costs, double oracle_cells,
                                       std::uint64_t seed) {
  MapSolution best = map_optimum(buyer, costs);
  if (buyer.schema().cell_count() <= oracle_cells) {
    double top = kNegInf;
    Configuration c(std::vector<Level>(buyer.schema().size(), 0));
    do {
      const double ub = buyer.evaluate(c);
      for (const auto& cost : costs) top = std::max(top, ub - cost.evaluate(c));
    } while (next_configuration(buyer.schema(), c));
    if (std::abs(top - best.surplus) > 1e-6 * std::max(1.0, std::abs(top)))
      throw InvariantViolation("MAP elimination disagrees with enumeration (seed " +
                               std::to_string(seed) + ")");
  }
  return best;
}

/// Runs one pricing mode on a drawn instance.  With check_bounds, the
/// surplus and payment guarantees are checked against the buyer's report
/// (the true utility for GAI pricing, the additive fit for AP).
inline TrialRun run_instance(const TrialInstance& inst, const Scenario& s, Pricing pricing,
                             const MapSolution& truth_map) {
  TrialRun run;
  GaiFunction report = inst.buyer;
  if (pricing == Pricing::kAp) {
    Rng rng(derive_seed(inst.seed, 3, 0));
    report = fit_additive(sample_points(inst.buyer, s.ap_samples, rng), inst.buyer.schema());
  }
  run.price_layout = report.layout_ptr();
  const GaiLayout& L = report.layout();
  const double g = static_cast<double>(L.element_count());
  AuctionConfig cfg;
  cfg.eps = s.eps ? *s.eps : s.delta * g;
  cfg.delta = s.delta;
  if (cfg.delta > cfg.eps) cfg.delta = cfg.eps;
  cfg.initial = InitialPrices::with_headroom(s.headroom ? *s.headroom : cfg.eps);
  cfg.record_rounds = true;

  std::vector<StraightforwardBidder> sellers;
  for (const auto& c : inst.costs) sellers.emplace_back(report.layout_ptr(), c);
  try {
    run.trace = run_auction(report, sellers, cfg);
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(std::string(e.what()) + " (" + to_string(pricing) + ", seed " +
                             std::to_string(inst.seed) + ")");
  }

  TrialMetrics& m = run.metrics;
  m.pricing = pricing;
  m.seed = inst.seed;
  m.eps = cfg.eps;
  m.delta = run.trace.delta;
  m.connectivity = L.structure().connectivity();
  m.rounds = run.trace.final_round;
  m.phase_a_rounds = run.trace.phase_a_rounds;
  m.termination_case = run.trace.termination_case;
  m.revelation = revelation_fraction(run.trace, L).mean;
  m.map_surplus = truth_map.surplus;
  if (run.trace.allocation) {
    const auto& a = *run.trace.allocation;
    m.traded = true;
    m.payment = a.payment;
    m.surplus = inst.buyer.evaluate(a.config) - inst.costs[a.winner].evaluate(a.config);
    m.vcg_payment = vcg_payment_for(report, inst.costs, a.winner, a.config).payment;
  }
  m.flagged = !(truth_map.surplus > 0.0);
  if (!m.flagged) m.efficiency = m.surplus / truth_map.surplus;

  if (s.check_bounds) {
    const double bound = (static_cast<double>(m.connectivity) + 2.0) * cfg.eps + 1e-6;
    const std::string where = " (" + to_string(pricing) + ", seed " + std::to_string(inst.seed) + ")";
    MapSolution face = pricing == Pricing::kGai ? truth_map : map_optimum(report, inst.costs);
    double face_surplus = 0.0;
    if (run.trace.allocation) {
      const auto& a = *run.trace.allocation;
      face_surplus = report.evaluate(a.config) - inst.costs[a.winner].evaluate(a.config);
    }
    if (face_surplus < std::max(0.0, face.surplus) - bound)
      throw InvariantViolation("surplus below the guaranteed bound" + where);
    if (run.trace.allocation && std::abs(m.payment - m.vcg_payment) > bound)
      throw InvariantViolation("payment outside the VCG band" + where);
  }
  return run;
}

/// Both (or the selected) pricing modes on trial `trial` of a scenario.
inline std::vector<TrialRun> run_trial(const Scenario& s, std::size_t trial) {
  TrialInstance inst = make_instance(s, trial);
  MapSolution truth = checked_map_optimum(inst.buyer, inst.costs, s.oracle_cells, inst.seed);
  std::vector<TrialRun> out;
  for (Pricing p : s.pricing) {
    out.push_back(run_instance(inst, s, p, truth));
    out.back().metrics.trial = trial;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Two-sided sign test p-value for `wins` against `losses` (ties dropped).
inline double sign_test_p(std::size_t wins, std::size_t losses) {
  const std::size_t n = wins + losses;
  if (n == 0) return 1.0;
  const std::size_t k = std::min(wins, losses);
  double tail = 0.0;
  for (std::size_t i = 0; i <= k; ++i)
    tail += std::exp(std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(i) + 1.0) -
                     std::lgamma(static_cast<double>(n - i) + 1.0) - static_cast<double>(n) * std::log(2.0));
  return std::min(1.0, 2.0 * tail);
}

struct ModeSummary {
  std::size_t trials = 0;
  std::size_t counted = 0;  // trials with positive optimal surplus
  double efficiency = std::numeric_limits<double>::quiet_NaN();
  double efficiency_se = std::numeric_limits<double>::quiet_NaN();
  double rounds = 0.0;
  double revelation = 0.0;
  double traded = 0.0;
};

struct CellSummary {
  std::size_t cell = 0;
  double axis_value = std::numeric_limits<double>::quiet_NaN();
  std::map<Pricing, ModeSummary> modes;
  /// Paired GAI - AP comparison (when both modes ran).
  std::size_t pairs = 0;
  std::size_t gai_wins = 0;
  std::size_t ap_wins = 0;
  double mean_difference = std::numeric_limits<double>::quiet_NaN();
  double sign_p = 1.0;
  bool significant = false;
};

inline constexpr double kSignificance = 0.01;

inline CellSummary summarize_cell(std::size_t cell, double value,
                                  const std::vector<TrialMetrics>& rows) {
  CellSummary c;
  c.cell = cell;
  c.axis_value = value;
  std::map<Pricing, std::vector<const TrialMetrics*>> by_mode;
  for (const auto& r : rows)
    if (r.cell == cell) by_mode[r.pricing].push_back(&r);
  for (auto& [p, list] : by_mode) {
    ModeSummary m;
    m.trials = list.size();
    double sum = 0.0, sq = 0.0;
    for (const auto* r : list) {
      m.rounds += static_cast<double>(r->rounds);
      m.revelation += r->revelation;
      m.traded += r->traded ? 1.0 : 0.0;
      if (r->flagged) continue;
      ++m.counted;
      sum += r->efficiency;
      sq += r->efficiency * r->efficiency;
    }
    m.rounds /= static_cast<double>(m.trials);
    m.revelation /= static_cast<double>(m.trials);
    m.traded /= static_cast<double>(m.trials);
    if (m.counted > 0) {
      const double n = static_cast<double>(m.counted);
      m.efficiency = sum / n;
      if (m.counted > 1) m.efficiency_se = std::sqrt(std::max(0.0, (sq - sum * sum / n) / (n - 1.0)) / n);
    }
    c.modes[p] = m;
  }
  if (by_mode.count(Pricing::kGai) && by_mode.count(Pricing::kAp)) {
    std::map<std::size_t, double> gai;
    for (const auto* r : by_mode[Pricing::kGai])
      if (!r->flagged) gai[r->trial] = r->efficiency;
    double diff = 0.0;
    for (const auto* r : by_mode[Pricing::kAp]) {
      auto it = gai.find(r->trial);
      if (r->flagged || it == gai.end()) continue;
      ++c.pairs;
      const double d = it->second - r->efficiency;
      diff += d;
      if (d > 1e-12) ++c.gai_wins;
      else if (d < -1e-12) ++c.ap_wins;
    }
    if (c.pairs) c.mean_difference = diff / static_cast<double>(c.pairs);
    c.sign_p = sign_test_p(c.gai_wins, c.ap_wins);
    c.significant = c.sign_p < kSignificance;
  }
  return c;
}

struct SweepResult {
  Scenario scenario;
  std::vector<TrialMetrics> rows;
  std::vector<CellSummary> cells;
};

struct SweepOptions {
  /// When set, every trial's trace is written to <dir>/<seed>-<pricing>.json.
  std::optional<std::filesystem::path> trace_dir;
  std::function<void(std::size_t cell, std::size_t trial)> progress;
};

inline SweepResult run_sweep(const Scenario& s, const SweepOptions& opt = {}) {
  validate(s);
  SweepResult res;
  res.scenario = s;
  const auto values = sweep_values(s);
  if (opt.trace_dir) std::filesystem::create_directories(*opt.trace_dir);
  for (std::size_t cell = 0; cell < values.size(); ++cell) {
    Scenario c = cell_scenario(s, values[cell]);
    for (std::size_t t = 0; t < s.trials; ++t) {
      if (opt.progress) opt.progress(cell, t);
      for (auto& run : run_trial(c, t)) {
        run.metrics.cell = cell;
        run.metrics.axis_value = values[cell];
        if (opt.trace_dir) {
          std::string file = std::to_string(run.metrics.seed) + "-" + to_string(run.metrics.pricing);
          if (values.size() > 1) file = "cell" + std::to_string(cell) + "-" + file;
          write_json_file((*opt.trace_dir / (file + ".json")).string(),
                          to_json(run.trace, *run.price_layout));
        }
        res.rows.push_back(run.metrics);
      }
    }
    res.cells.push_back(summarize_cell(cell, values[cell], res.rows));
  }
  return res;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_metrics_csv(std::ostream& out, const SweepResult& r) {
  out << "cell,axis,value,pricing,trial,seed,efficiency,surplus,map_surplus,rounds,"
         "phase_a_rounds,revelation,traded,payment,vcg_payment,case,eps,delta,connectivity,flagged\n";
  for (const auto& m : r.rows)
    out << m.cell << ',' << to_string(r.scenario.axis) << ',' << csv_number(m.axis_value) << ','
        << to_string(m.pricing) << ',' << m.trial << ',' << m.seed << ',' << csv_number(m.efficiency)
        << ',' << csv_number(m.surplus) << ',' << csv_number(m.map_surplus) << ',' << m.rounds << ','
        << m.phase_a_rounds << ',' << csv_number(m.revelation) << ',' << (m.traded ? 1 : 0) << ','
        << csv_number(m.payment) << ',' << csv_number(m.vcg_payment) << ',' << m.termination_case
        << ',' << csv_number(m.eps) << ',' << csv_number(m.delta) << ',' << m.connectivity << ','
        << (m.flagged ? 1 : 0) << '\n';
}

inline void write_summary_csv(std::ostream& out, const SweepResult& r) {
  out << "cell,axis,value,pricing,trials,counted,efficiency,efficiency_se,rounds,revelation,"
         "traded,pairs,gai_wins,ap_wins,mean_difference,sign_p,significant\n";
  for (const auto& c : r.cells)
    for (const auto& [p, m] : c.modes)
      out << c.cell << ',' << to_string(r.scenario.axis) << ',' << csv_number(c.axis_value) << ','
          << to_string(p) << ',' << m.trials << ',' << m.counted << ',' << csv_number(m.efficiency)
          << ',' << csv_number(m.efficiency_se) << ',' << csv_number(m.rounds) << ','
          << csv_number(m.revelation) << ',' << csv_number(m.traded) << ',' << c.pairs << ','
          << c.gai_wins << ',' << c.ap_wins << ',' << csv_number(c.mean_difference) << ','
          << csv_number(c.sign_p) << ',' << (c.significant ? 1 : 0) << '\n';
}

/// Reshapes a summary into one wide table per quantity: the sweep value in
/// the first column, one column per pricing mode.
struct PlotTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline std::vector<PlotTable> plot_tables(const SweepResult& r) {
  const std::string axis = to_string(r.scenario.axis);
  std::vector<Pricing> modes;
  for (const auto& c : r.cells)
    for (const auto& [p, m] : c.modes)
      if (std::find(modes.begin(), modes.end(), p) == modes.end()) modes.push_back(p);
  auto table = [&](const std::string& what, auto get) {
    PlotTable t;
    t.name = what + "_vs_" + axis;
    t.header.push_back(axis);
    for (Pricing p : modes) t.header.push_back(to_string(p));
    for (const auto& c : r.cells) {
      std::vector<double> row{c.axis_value};
      for (Pricing p : modes) {
        auto it = c.modes.find(p);
        row.push_back(it == c.modes.end() ? std::numeric_limits<double>::quiet_NaN() : get(it->second));
      }
      t.rows.push_back(row);
    }
    return t;
  };
  std::vector<PlotTable> out;
  out.push_back(table("efficiency", [](const ModeSummary& m) { return m.efficiency; }));
  out.push_back(table("rounds", [](const ModeSummary& m) { return m.rounds; }));
  out.push_back(table("revelation", [](const ModeSummary& m) { return m.revelation; }));
  // Efficiency against rounds, one row per (cell, mode).
  PlotTable er;
  er.name = "efficiency_vs_rounds";
  er.header = {"rounds", "efficiency", axis, "pricing_is_gai"};
  for (const auto& c : r.cells)
    for (const auto& [p, m] : c.modes)
      er.rows.push_back({m.rounds, m.efficiency, c.axis_value, p == Pricing::kGai ? 1.0 : 0.0});
  out.push_back(er);
  return out;
}

inline void write_plot_table(std::ostream& out, const PlotTable& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_number(row[i]);
    out << '\n';
  }
}

/// Rebuilds a SweepResult's cell summaries from a summary.csv stream, for
/// the plotdata command.
inline SweepResult read_summary_csv(std::istream& in) {
  SweepResult r;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("summary.csv is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        f.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur += ch;
      }
    }
    f.push_back(cur);
    return f;
  };
  auto num = [](const std::string& s) {
    return s.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
  };
  const auto head = split(line);
  if (head.size() < 17 || head[0] != "cell") throw std::runtime_error("not a summary.csv file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() < 17) throw std::runtime_error("short row in summary.csv");
    const auto cell = static_cast<std::size_t>(std::stoul(f[0]));
    r.scenario.axis = sweep_axis_from_string(f[1]);
    if (r.cells.empty() || r.cells.back().cell != cell) {
      r.cells.emplace_back();
      r.cells.back().cell = cell;
      r.cells.back().axis_value = num(f[2]);
    }
    ModeSummary m;
    m.trials = std::stoul(f[4]);
    m.counted = std::stoul(f[5]);
    m.efficiency = num(f[6]);
    m.efficiency_se = num(f[7]);
    m.rounds = num(f[8]);
    m.revelation = num(f[9]);
    m.traded = num(f[10]);
    r.cells.back().modes[pricing_from_string(f[3])] = m;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Worked example

struct AnchorCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Replays the three-attribute two-seller example and checks its anchor
/// facts one by one.
inline std::vector<AnchorCheck> replay_golden(AuctionTrace* trace_out = nullptr) {
  auto L = golden::abc_layout();
  auto buyer = golden::abc_buyer(L);
  std::vector<GaiFunction> costs{golden::abc_seller1(L), golden::abc_seller2(L)};
  std::vector<StraightforwardBidder> sellers{StraightforwardBidder(L, costs[0]),
                                             StraightforwardBidder(L, costs[1])};
  AuctionConfig cfg;
  cfg.eps = golden::kAbcEpsilon;
  cfg.delta = golden::kAbcDelta;
  cfg.initial = InitialPrices::constant({golden::kAbcPriceFirst, golden::kAbcPriceSecond});
  AuctionTrace t = run_auction(buyer, sellers, cfg);

  std::vector<AnchorCheck> out;
  auto check = [&](std::string name, bool ok, std::string detail) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  auto num = [](double v) { return csv_number(v); };
  auto cfg_str = [&](const std::optional<Configuration>& c) {
    return c ? to_string(L->schema(), *c) : std::string("none");
  };
  const Configuration a1b2c1{0, 1, 0};
  const Configuration a1b1c1{0, 0, 0};
  check("switch after round 9", t.phase_a_rounds == 9, "phase A rounds " + std::to_string(t.phase_a_rounds));
  check("eta of s1 is a1b2c1", t.eta[0] == std::optional<Configuration>(a1b2c1), cfg_str(t.eta[0]));
  check("eta of s2 is a1b1c1", t.eta[1] == std::optional<Configuration>(a1b1c1), cfg_str(t.eta[1]));
  bool s2_drop = t.rounds.size() == 15 && t.rounds[14].status == std::vector<int>{1, 0} &&
                 t.rounds[14].discount == 48.0;
  check("s2 drops at discount 48 in round 15", s2_drop,
        "final round " + std::to_string(t.final_round) + ", discount " +
            num(t.rounds.empty() ? 0.0 : t.rounds.back().discount));
  const bool alloc = t.allocation && t.allocation->winner == 0 && t.allocation->config == a1b2c1 &&
                     t.allocation->payment == 109.0 && t.termination_case == 4;
  check("case 4: s1 supplies a1b2c1 for 109", alloc, outcome_summary(t, L->schema()));
  const double ub = t.allocation ? buyer.evaluate(t.allocation->config) - t.allocation->payment : 0.0;
  const double sp = t.allocation ? t.allocation->payment - costs[0].evaluate(t.allocation->config) : 0.0;
  check("buyer profit 31", t.allocation && ub == 31.0, num(ub));
  check("seller profit 14", t.allocation && sp == 14.0, num(sp));
  const double map = map_optimum(buyer, costs).surplus;
  check("surplus 45 equals the optimum", t.allocation && ub + sp == 45.0 && map == 45.0,
        "achieved " + num(ub + sp) + ", optimum " + num(map));
  const auto v = vcg_payment(buyer, costs);
  check("VCG profit 20, within eps of the auction profit",
        v.payment - costs[0].evaluate(v.config) == 20.0 && std::abs(sp - 20.0) <= cfg.eps,
        "VCG payment " + num(v.payment));
  check("phase A rounds within the price-sum bound",
        static_cast<double>(t.phase_a_rounds) <= t.initial_price_sum * 2.0 / cfg.eps,
        std::to_string(t.phase_a_rounds) + " <= " + num(t.initial_price_sum * 2.0 / cfg.eps));
  if (trace_out) *trace_out = std::move(t);
  return out;
}

}  // namespace gaiauction

#endif  // GAIAUCTION_EXPERIMENTS_HPP
