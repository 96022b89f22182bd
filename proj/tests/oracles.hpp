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

// Brute-force reference implementations used by the tests.  Everything here
// enumerates Theta directly and shares no code with the library's
// optimization routines.

#ifndef GAIAUCTION_TESTS_ORACLES_HPP
#define GAIAUCTION_TESTS_ORACLES_HPP

#include <gaiauction/core_model.hpp>
#include <gaiauction/random.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using gaiauction::AttributeSchema;
using gaiauction::Configuration;
using gaiauction::GaiFunction;
using gaiauction::GaiLayout;
using gaiauction::Level;

inline std::vector<Configuration> all_configurations(const AttributeSchema& s) {
  std::vector<Configuration> out;
  std::vector<Level> l(s.size(), 0);
  for (;;) {
    out.emplace_back(l);
    std::size_t i = s.size();
    while (i > 0) {
      --i;
      if (++l[i] < s.domain_size(i)) break;
      l[i] = 0;
      if (i == 0) return out;
    }
    if (s.size() == 0) return out;
  }
}

/// Sum of table entries by direct index arithmetic.
inline double value(const GaiFunction& f, const Configuration& c) {
  double v = 0.0;
  const auto& L = f.layout();
  for (std::size_t r = 0; r < L.element_count(); ++r) {
    const auto& attrs = L.structure().element(r);
    std::size_t x = 0;
    for (std::size_t a : attrs) x = x * static_cast<std::size_t>(f.schema().domain_size(a)) +
                                    static_cast<std::size_t>(c[a]);
    v += f.table(r)[x];
  }
  return v;
}

struct Best {
  Configuration config;
  double value = -std::numeric_limits<double>::infinity();
};

/// First maximizer in lexicographic order, among configurations accepted by
/// `keep`.
inline Best argmax(const AttributeSchema& s, const std::function<double(const Configuration&)>& f,
                   const std::function<bool(const Configuration&)>& keep = nullptr,
                   double tol = 1e-9) {
  Best b;
  for (const auto& c : all_configurations(s)) {
    if (keep && !keep(c)) continue;
    const double v = f(c);
    if (v > b.value + tol) {
      b.value = v;
      b.config = c;
    }
  }
  return b;
}

/// Global sub-configuration id by direct arithmetic.
inline std::size_t sub_id(const GaiLayout& L, std::size_t r, const Configuration& c) {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t size = 1;
    for (std::size_t a : L.structure().element(k))
      size *= static_cast<std::size_t>(L.schema().domain_size(a));
    offset += size;
  }
  std::size_t x = 0;
  for (std::size_t a : L.structure().element(r))
    x = x * static_cast<std::size_t>(L.schema().domain_size(a)) + static_cast<std::size_t>(c[a]);
  return offset + x;
}

/// Literal inclusion-exclusion over all earlier-element subsets:
/// f_r = sum over subsets S of {1..r-1} of (-1)^|S| u([I_r ∩ ⋂_{s∈S} I_s]),
/// elements taken in the given order, [X] filling the rest from ref.
inline std::vector<std::vector<double>> inclusion_exclusion(
    const std::function<double(const Configuration&)>& u, const GaiLayout& L,
    const std::vector<std::size_t>& order, const Configuration& ref) {
  const std::size_t g = order.size();
  std::vector<std::vector<double>> f(L.element_count());
  for (std::size_t pos = 0; pos < g; ++pos) {
    const std::size_t r = order[pos];
    const auto& attrs = L.structure().element(r);
    std::size_t size = 1;
    for (std::size_t a : attrs) size *= static_cast<std::size_t>(L.schema().domain_size(a));
    f[r].assign(size, 0.0);
    for (std::size_t x = 0; x < size; ++x) {
      Configuration full = ref;
      std::size_t rem = x;
      for (std::size_t k = attrs.size(); k-- > 0;) {
        const auto d = static_cast<std::size_t>(L.schema().domain_size(attrs[k]));
        full[attrs[k]] = static_cast<Level>(rem % d);
        rem /= d;
      }
      double total = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << pos); ++mask) {
        std::vector<std::size_t> keep(attrs);
        int bits = 0;
        for (std::size_t j = 0; j < pos; ++j) {
          if (!(mask >> j & 1)) continue;
          ++bits;
          const auto& other = L.structure().element(order[j]);
          std::vector<std::size_t> tmp;
          std::set_intersection(keep.begin(), keep.end(), other.begin(), other.end(),
                                std::back_inserter(tmp));
          keep = tmp;
        }
        Configuration c = ref;
        for (std::size_t a : keep) c[a] = full[a];
        total += (bits % 2 ? -1.0 : 1.0) * u(c);
      }
      f[r][x] = total;
    }
  }
  return f;
}

/// Random GAI function on the given layout with integer or real entries.
inline GaiFunction random_function(const gaiauction::LayoutPtr& L, gaiauction::Rng& rng,
                                   bool integers, double lo = 0.0, double hi = 100.0) {
  std::vector<double> v(L->total_size());
  for (double& x : v) {
    x = rng.uniform(lo, hi);
    if (integers) x = std::floor(x);
  }
  return GaiFunction(L, std::move(v));
}

}  // namespace oracle

#endif  // GAIAUCTION_TESTS_ORACLES_HPP
