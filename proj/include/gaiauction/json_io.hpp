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

#ifndef GAIAUCTION_JSON_IO_HPP
#define GAIAUCTION_JSON_IO_HPP

/// \file json_io.hpp
///
/// JSON forms of schemas, structures, functions, CDI maps and auction
/// traces.  Every top-level document carries a "format" tag.

#include <gaiauction/auction_engine.hpp>
#include <gaiauction/core_model.hpp>
#include <gaiauction/decomposition.hpp>

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaiauction {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFunctionFormat = "gai-function/1";
inline constexpr const char* kTabularFormat = "tabular-function/1";
inline constexpr const char* kCdiFormat = "cdi-map/1";
inline constexpr const char* kTraceFormat = "gai-auction-trace/1";

inline void expect_format(const Json& j, const char* format) {
  if (!j.contains("format") || j.at("format") != format)
    throw std::invalid_argument(std::string("expected a document of format ") + format);
}

// ---------------------------------------------------------------------------
// Schema and structure

/// {"attributes": [{"name": "a", "levels": ["a1", "a2"]}, ...]}.  A bare
/// {"domains": [2, 3]} is accepted on input.
inline Json to_json(const AttributeSchema& s) {
  Json attrs = Json::array();
  for (const auto& a : s.attributes()) attrs.push_back({{"name", a.name}, {"levels", a.levels}});
  return Json{{"attributes", attrs}};
}

inline AttributeSchema schema_from_json(const Json& j) {
  if (j.contains("domains")) return AttributeSchema::with_domains(j.at("domains").get<std::vector<int>>());
  std::vector<Attribute> attrs;
  for (const auto& a : j.at("attributes"))
    attrs.push_back({a.at("name").get<std::string>(), a.at("levels").get<std::vector<std::string>>()});
  return AttributeSchema(std::move(attrs));
}

inline Json to_json(const GaiStructure& s) {
  Json edges = Json::array();
  for (const auto& [a, b] : s.edges()) edges.push_back({a, b});
  return Json{{"attributes", s.attribute_count()}, {"elements", s.elements()}, {"edges", edges}};
}

inline GaiStructure structure_from_json(const Json& j) {
  std::vector<GaiStructure::Edge> edges;
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  GaiStructure s(j.at("attributes").get<std::size_t>(),
                 j.at("elements").get<std::vector<std::vector<std::size_t>>>(), std::move(edges));
  auto v = validate_structure(s);
  if (!v.empty()) throw std::invalid_argument("invalid GAI structure: " + v.front().message);
  return s;
}

// ---------------------------------------------------------------------------
// Functions

inline Json to_json(const GaiFunction& f) {
  return Json{{"format", kFunctionFormat},
              {"schema", to_json(f.schema())},
              {"structure", to_json(f.structure())},
              {"tables", f.tables()}};
}

inline GaiFunction function_from_json(const Json& j) {
  expect_format(j, kFunctionFormat);
  auto L = make_layout(schema_from_json(j.at("schema")), structure_from_json(j.at("structure")));
  return GaiFunction(L, j.at("tables").get<std::vector<std::vector<double>>>());
}

inline Json to_json(const TabularFunction& u) {
  return Json{{"format", kTabularFormat},
              {"schema", to_json(u.schema())},
              {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

/// Accepts a tabular document, or a GAI function document (expanded).
inline TabularFunction tabular_from_json(const Json& j) {
  if (j.contains("format") && j.at("format") == kFunctionFormat)
    return TabularFunction::from(function_from_json(j));
  expect_format(j, kTabularFormat);
  return TabularFunction(schema_from_json(j.at("schema")), j.at("values").get<std::vector<double>>());
}

inline Json to_json(const CdiMap& m) {
  Json edges = Json::array();
  for (const auto& [a, b] : m.edges()) edges.push_back({a, b});
  return Json{{"format", kCdiFormat}, {"attributes", m.attribute_count()}, {"edges", edges}};
}

inline CdiMap cdi_map_from_json(const Json& j) {
  expect_format(j, kCdiFormat);
  CdiMap m(j.at("attributes").get<std::size_t>());
  for (const auto& e : j.at("edges")) m.add_edge(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  return m;
}

// ---------------------------------------------------------------------------
// Auction configuration and traces

inline Json to_json(const AuctionConfig& c) {
  Json j{{"eps", c.eps}, {"delta", c.delta}, {"round_cap", c.round_cap}};
  if (!c.initial.per_element.empty()) j["initial_prices"] = c.initial.per_element;
  else j["headroom"] = c.initial.headroom;
  return j;
}

/// {"eps": 8, "delta": 4, "initial_prices": [75, 90]} or {"headroom": h}.
/// Without either, the headroom defaults to eps.
inline AuctionConfig auction_config_from_json(const Json& j) {
  AuctionConfig c;
  c.eps = j.value("eps", 1.0);
  c.delta = j.value("delta", 0.0);
  c.round_cap = j.value("round_cap", c.round_cap);
  if (j.contains("initial_prices"))
    c.initial = InitialPrices::constant(j.at("initial_prices").get<std::vector<double>>());
  else
    c.initial = InitialPrices::with_headroom(j.value("headroom", c.eps));
  return c;
}

inline Json to_json(const Configuration& c) { return Json(c.levels); }

inline Json to_json(const AuctionTrace& t, const GaiLayout& layout) {
  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    Json jr{{"round", r.round}, {"phase", r.phase == Phase::kA ? "A" : "B"},
            {"discount", r.discount}, {"bids", r.bids}, {"status", r.status}};
    if (r.phase == Phase::kA) {
      jr["preferred"] = r.preferred;
      jr["decremented"] = r.decremented;
      jr["switched"] = r.switched;
    }
    rounds.push_back(std::move(jr));
  }
  Json eta = Json::array();
  for (const auto& e : t.eta) eta.push_back(e ? to_json(*e) : Json(nullptr));
  Json labels = Json::array();
  for (SubConfigId id = 0; id < layout.total_size(); ++id) labels.push_back(layout.describe(id));
  std::vector<SubConfigId> revealed;
  for (SubConfigId id = 0; id < t.revealed.size(); ++id)
    if (t.revealed[id]) revealed.push_back(id);
  Json outcome = nullptr;
  if (t.allocation)
    outcome = {{"winner", t.allocation->winner},
               {"configuration", to_json(t.allocation->config)},
               {"payment", t.allocation->payment}};
  return Json{{"format", kTraceFormat},
              {"eps", t.eps},
              {"delta", t.delta},
              {"initial_price_sum", t.initial_price_sum},
              {"sub_configurations", labels},
              {"rounds", rounds},
              {"phase_a_rounds", t.phase_a_rounds},
              {"final_round", t.final_round},
              {"eta", eta},
              {"termination_case", t.termination_case},
              {"offered_at_value", t.offered_at_value},
              {"offer_accepted", t.offer_accepted},
              {"final_discount", t.final_discount},
              {"outcome", outcome},
              {"next_best_calls", t.next_best_calls},
              {"revealed", revealed},
              {"final_prices", t.final_prices.prices}};
}

/// One line: "case 4: seller 0 supplies a=a1 b=b2 c=c1 for 109 after 15 rounds".
inline std::string outcome_summary(const AuctionTrace& t, const AttributeSchema& schema) {
  std::string s = "case " + std::to_string(t.termination_case) + ": ";
  if (!t.allocation) {
    s += "no trade";
  } else {
    std::ostringstream pay;
    pay << t.allocation->payment;
    s += "seller " + std::to_string(t.allocation->winner) + " supplies " +
         to_string(schema, t.allocation->config) + " for " + pay.str();
  }
  return s + " after " + std::to_string(t.final_round) + " rounds";
}

// ---------------------------------------------------------------------------
// Files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace gaiauction

#endif  // GAIAUCTION_JSON_IO_HPP
