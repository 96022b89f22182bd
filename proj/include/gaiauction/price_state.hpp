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

#ifndef GAIAUCTION_PRICE_STATE_HPP
#define GAIAUCTION_PRICE_STATE_HPP

#include <gaiauction/core_model.hpp>

#include <cstddef>
#include <vector>

namespace gaiauction {

/// Prices on every sub-configuration of the price layout, plus the
/// configuration-level discount.  p(theta) = sum_r p(theta_r) - discount.
struct PriceState {
  LayoutPtr layout;
  std::vector<double> prices;
  double discount = 0.0;
  std::size_t round = 1;
};

inline double price_of(const PriceState& ps, const Configuration& c) {
  double p = 0.0;
  for (std::size_t r = 0; r < ps.layout->element_count(); ++r)
    p += ps.prices[ps.layout->id(r, c)];
  return p - ps.discount;
}

}  // namespace gaiauction

#endif  // GAIAUCTION_PRICE_STATE_HPP
