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

// Command-line front end: decomposition, single auctions, trader
// generation, additive fits, simulation sweeps and the worked example.

#include <gaiauction/gaiauction.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace gaiauction;

namespace {

inline constexpr const char* kAuctionScenarioFormat = "auction-scenario/1";
inline constexpr const char* kGenSpecFormat = "gen-spec/1";

/// A function given inline or as a path relative to the referring file.
GaiFunction load_function(const Json& j, const fs::path& base) {
  if (j.is_string()) return function_from_json(read_json_file((base / j.get<std::string>()).string()));
  return function_from_json(j);
}

int cmd_decompose(const std::string& input, const std::string& out_dir, double tol) {
  const TabularFunction u = tabular_from_json(read_json_file(input));
  const CdiMap map = build_cdi_map(u, tol);
  const GaiStructure s = tree_decompose(map);
  const GaiFunction f = gai_constituents(u, s, tol);
  fs::create_directories(out_dir);
  write_json_file((fs::path(out_dir) / "cdi_map.json").string(), to_json(map));
  write_json_file((fs::path(out_dir) / "structure.json").string(), to_json(s));
  write_json_file((fs::path(out_dir) / "function.json").string(), to_json(f));
  std::cout << "attributes " << u.schema().size() << "\n"
            << "cdi edges " << map.edges().size() << "\n"
            << "elements " << s.element_count() << "\n"
            << "largest element " << s.max_element_size() << "\n"
            << "connectivity " << s.connectivity() << "\n"
            << "reconstruction error " << csv_number(reconstruction_error(u, f)) << "\n";
  return 0;
}

int cmd_auction_run(const std::string& scenario_path, const std::string& trace_path) {
  const Json j = read_json_file(scenario_path);
  expect_format(j, kAuctionScenarioFormat);
  const fs::path base = fs::path(scenario_path).parent_path();
  const GaiFunction buyer = load_function(j.at("buyer"), base);
  std::vector<GaiFunction> costs;
  for (const auto& s : j.at("sellers")) costs.push_back(load_function(s, base));
  AuctionConfig cfg = auction_config_from_json(j.value("config", Json::object()));
  std::vector<StraightforwardBidder> sellers;
  for (const auto& c : costs) sellers.emplace_back(buyer.layout_ptr(), c);
  const AuctionTrace t = run_auction(buyer, sellers, cfg);
  Json doc = to_json(t, buyer.layout());
  if (j.contains("seed")) doc["seed"] = j.at("seed");
  if (trace_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    write_json_file(trace_path, doc);
  }
  std::cout << outcome_summary(t, buyer.schema()) << "\n";
  return 0;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir) {
  const Json j = read_json_file(spec_path);
  expect_format(j, kGenSpecFormat);
  const GaiStructure s = structure_from_json(j.at("structure"));
  const AttributeSchema schema = j.contains("schema")
                                     ? schema_from_json(j.at("schema"))
                                     : AttributeSchema::uniform(s.attribute_count(), j.at("domain").get<int>());
  const LayoutPtr layout = make_layout(schema, s);
  const std::size_t count = j.value("count", std::size_t{1});
  const std::uint64_t seed = j.value("seed", std::uint64_t{1});
  fs::create_directories(out_dir);
  for (std::size_t i = 0; i < count; ++i) {
    GenSpec g;
    g.mode = gen_mode_from_string(j.value("mode", std::string("random")));
    g.mui_k = j.value("k", 0.0);
    g.mean = j.value("mean", g.mean);
    g.sigma = j.value("sigma", g.sigma);
    g.seed = derive_seed(seed, i, 0);
    Json doc = to_json(generate_trader(layout, g));
    doc["generator"] = {{"mode", to_string(g.mode)}, {"k", g.mui_k}, {"mean", g.mean},
                        {"sigma", g.sigma}, {"seed", seed}, {"index", i}, {"stream", g.seed}};
    const fs::path p = fs::path(out_dir) / ("trader-" + std::to_string(i) + ".json");
    write_json_file(p.string(), doc);
    std::cout << p.string() << "\n";
  }
  return 0;
}

int cmd_approx(const std::string& input, const std::string& output, std::size_t samples,
               std::uint64_t seed, double grid_cap) {
  const GaiFunction u = function_from_json(read_json_file(input));
  Rng rng(seed);
  const bool small = u.schema().cell_count() <= grid_cap;
  const RegressionSample fit_points = samples == 0 && small ? exhaustive_sample(u)
                                                            : sample_points(u, samples ? samples : 300, rng);
  const GaiFunction fit = fit_additive(fit_points, u.schema());
  write_json_file(output, to_json(fit));
  Rng grid_rng(derive_seed(seed, 1, 0));
  const RegressionSample grid = small ? exhaustive_sample(u) : sample_points(u, 10000, grid_rng);
  const ResidualReport r = residuals(u, fit, grid);
  std::cout << "fit points " << fit_points.size() << "\n"
            << "grid " << (small ? "exhaustive" : "sampled") << " " << r.points << "\n"
            << "max abs residual " << csv_number(r.max_abs) << "\n"
            << "mean abs residual " << csv_number(r.mean_abs) << "\n";
  return 0;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir, bool traces) {
  const Scenario s = scenario_from_json(read_json_file(scenario_path));
  fs::create_directories(out_dir);
  SweepOptions opt;
  if (traces) opt.trace_dir = fs::path(out_dir) / "trace";
  const auto values = sweep_values(s);
  opt.progress = [&](std::size_t cell, std::size_t trial) {
    if (trial == 0)
      std::cerr << s.name << ": cell " << cell + 1 << "/" << values.size() << " ("
                << to_string(s.axis) << " " << csv_number(values[cell]) << ")\n";
  };
  const SweepResult r = run_sweep(s, opt);
  {
    std::ofstream m(fs::path(out_dir) / "metrics.csv");
    write_metrics_csv(m, r);
    std::ofstream sum(fs::path(out_dir) / "summary.csv");
    write_summary_csv(sum, r);
  }
  write_summary_csv(std::cout, r);
  return 0;
}

int cmd_plotdata(const std::string& summary, const std::string& out_dir) {
  std::ifstream in(summary);
  if (!in) throw std::runtime_error("cannot read " + summary);
  const SweepResult r = read_summary_csv(in);
  fs::create_directories(out_dir);
  for (const auto& t : plot_tables(r)) {
    const fs::path p = fs::path(out_dir) / (t.name + ".csv");
    std::ofstream out(p);
    write_plot_table(out, t);
    std::cout << p.string() << "\n";
  }
  return 0;
}

int cmd_golden(const std::string& trace_path) {
  AuctionTrace t;
  const auto checks = replay_golden(&t);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    ok &= c.passed;
  }
  if (!trace_path.empty()) write_json_file(trace_path, to_json(t, *golden::abc_layout()));
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GAI multiattribute procurement auctions"};
  app.require_subcommand(1);

  std::string input, out, scenario, trace, summary;
  double tol = 1e-6;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  double grid_cap = 1e5;
  bool traces = false;

  auto* dec = app.add_subcommand("decompose", "CDI map, GAI structure and constituents of a table");
  dec->add_option("--input", input, "tabular-function or gai-function JSON")->required()->check(CLI::ExistingFile);
  dec->add_option("--out", out, "output directory")->required();
  dec->add_option("--tol", tol, "CDI tolerance");

  auto* auc = app.add_subcommand("auction", "single auctions");
  auc->require_subcommand(1);
  auto* run = auc->add_subcommand("run", "run one auction and print its trace");
  run->add_option("--scenario", scenario, "auction-scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--trace", trace, "write the trace here instead of stdout");

  auto* gen = app.add_subcommand("gen", "generate trader functions from a gen-spec file");
  gen->add_option("--spec", input, "gen-spec JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--out", out, "output directory")->required();

  auto* apx = app.add_subcommand("approx", "least-squares additive fit of a GAI function");
  apx->add_option("--input", input, "gai-function JSON")->required()->check(CLI::ExistingFile);
  apx->add_option("--out", out, "fitted function JSON")->required();
  apx->add_option("--samples", samples, "regression points (0: every configuration when small)");
  apx->add_option("--seed", seed, "sampling seed");
  apx->add_option("--grid-cap", grid_cap, "largest domain evaluated exhaustively");

  auto* sim = app.add_subcommand("simulate", "run a scenario sweep");
  sim->add_option("--scenario", scenario, "gai-scenario JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", out, "output directory")->required();
  sim->add_flag("--trace", traces, "write every trial's trace under <out>/trace");

  auto* plot = app.add_subcommand("plotdata", "reshape summary.csv into one table per plotted quantity");
  plot->add_option("--summary", summary, "summary.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out, "output directory")->required();

  auto* gold = app.add_subcommand("golden", "replay the three-attribute example");
  gold->add_option("--trace", trace, "write the trace here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dec) return cmd_decompose(input, out, tol);
    if (*run) return cmd_auction_run(scenario, trace);
    if (*gen) return cmd_gen(input, out);
    if (*apx) return cmd_approx(input, out, samples, seed, grid_cap);
    if (*sim) return cmd_simulate(scenario, out, traces);
    if (*plot) return cmd_plotdata(summary, out);
    if (*gold) return cmd_golden(trace);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
