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

#ifndef GAIAUCTION_GOLDEN_HPP
#define GAIAUCTION_GOLDEN_HPP

/// \file golden.hpp
///
/// Two small reference instances used throughout the tests and by the
/// `golden` CLI command.
///
/// The three-attribute procurement instance: attributes a, b, c with two
/// levels each, elements {a,b} and {b,c}, one buyer and two sellers.  Tables
/// are in this library's order (first attribute most significant), i.e.
/// a1b1, a1b2, a2b1, a2b2 and b1c1, b1c2, b2c1, b2c2.
///
/// The three-attribute binary function whose CDI map is the chain
/// x1 - x2 - x3.

#include <gaiauction/core_model.hpp>

namespace gaiauction::golden {

inline AttributeSchema abc_schema() {
  return AttributeSchema({{"a", {"a1", "a2"}}, {"b", {"b1", "b2"}}, {"c", {"c1", "c2"}}});
}

inline LayoutPtr abc_layout() {
  return make_layout(abc_schema(), GaiStructure(3, {{0, 1}, {1, 2}}, {{0, 1}}));
}

inline GaiFunction abc_buyer(const LayoutPtr& layout) {
  return GaiFunction(layout, std::vector<std::vector<double>>{{65, 55, 50, 70}, {50, 60, 85, 75}});
}
inline GaiFunction abc_seller1(const LayoutPtr& layout) {
  return GaiFunction(layout, std::vector<std::vector<double>>{{35, 30, 20, 70}, {65, 70, 65, 61}});
}
inline GaiFunction abc_seller2(const LayoutPtr& layout) {
  return GaiFunction(layout, std::vector<std::vector<double>>{{35, 25, 20, 25}, {55, 70, 110, 95}});
}

inline constexpr double kAbcEpsilon = 8.0;
inline constexpr double kAbcDelta = 4.0;
inline constexpr double kAbcPriceFirst = 75.0;
inline constexpr double kAbcPriceSecond = 90.0;

inline AttributeSchema chain_schema() {
  return AttributeSchema({{"x1", {"0", "1"}}, {"x2", {"0", "1"}}, {"x3", {"0", "1"}}});
}

/// Values in lexicographic order 000, 001, ..., 111 of (x1, x2, x3).
inline TabularFunction chain_function() {
  return TabularFunction(chain_schema(), {0, 3, 2, 7, 5, 8, 6, 11});
}

/// Expected constituents relative to (0,0,0) on elements {x1,x2}, {x2,x3}.
inline std::vector<std::vector<double>> chain_constituents() {
  return {{0, 2, 5, 6}, {0, 3, 0, 5}};
}

}  // namespace gaiauction::golden

#endif  // GAIAUCTION_GOLDEN_HPP
