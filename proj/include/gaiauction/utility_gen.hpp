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

#ifndef GAIAUCTION_UTILITY_GEN_HPP
#define GAIAUCTION_UTILITY_GEN_HPP

/// \file utility_gen.hpp
///
/// Random GAI value functions for simulation.
///
/// Per element a local subutility table in [0,1] is drawn (uniform, sorted
/// to be monotone in every attribute, or multiplicative-MUI), turned into a
/// GAI constituent by subtracting its value on the separator slice, weighted
/// by a point on the simplex, summed, and finally mapped affinely onto
/// [mean - sigma, mean + sigma].  Also: junction-forest shape generators.

#include <gaiauction/core_model.hpp>
#include <gaiauction/gai_optim.hpp>
#include <gaiauction/random.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaiauction {

enum class GenMode { kRandom, kFopi, kMui, kMuiFopi };

inline std::string to_string(GenMode m) {
  switch (m) {
    case GenMode::kRandom: return "random";
    case GenMode::kFopi: return "fopi";
    case GenMode::kMui: return "mui";
    case GenMode::kMuiFopi: return "mui_fopi";
  }
  return "?";
}

inline GenMode gen_mode_from_string(const std::string& s) {
  if (s == "random") return GenMode::kRandom;
  if (s == "fopi") return GenMode::kFopi;
  if (s == "mui") return GenMode::kMui;
  if (s == "mui_fopi") return GenMode::kMuiFopi;
  throw std::invalid_argument("unknown generation mode '" + s + "'");
}

struct GenSpec {
  GenMode mode = GenMode::kRandom;
  double mui_k = 0.0;  // MUI modes only
  double mean = 500.0;
  double sigma = 200.0;  // half-range
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Table helpers.  A local table is dense over an element's attributes with
// the first attribute most significant (GaiLayout::Element order).

/// Sorts along each axis in turn, last attribute first, until a full pass
/// changes nothing.  The result holds the same values and is non-decreasing
/// along every axis.
inline std::vector<double> enforce_fopi(std::vector<double> table,
                                        const std::vector<int>& radix) {
  const std::size_t k = radix.size();
  std::vector<std::size_t> stride(k);
  std::size_t size = 1;
  for (std::size_t i = k; i-- > 0;) {
    stride[i] = size;
    size *= static_cast<std::size_t>(radix[i]);
  }
  if (table.size() != size) throw std::invalid_argument("enforce_fopi: size mismatch");
  std::vector<double> line;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t axis = k; axis-- > 0;) {
      const std::size_t len = static_cast<std::size_t>(radix[axis]);
      const std::size_t st = stride[axis];
      for (std::size_t base = 0; base < size; ++base) {
        if ((base / st) % len != 0) continue;
        line.resize(len);
        for (std::size_t l = 0; l < len; ++l) line[l] = table[base + l * st];
        if (std::is_sorted(line.begin(), line.end())) continue;
        std::sort(line.begin(), line.end());
        for (std::size_t l = 0; l < len; ++l) table[base + l * st] = line[l];
        changed = true;
      }
    }
  }
  return table;
}

/// True iff the table is non-decreasing along every axis.
inline bool is_monotone(const std::vector<double>& table, const std::vector<int>& radix,
                        double tol = 0.0) {
  std::size_t size = 1;
  std::vector<std::size_t> stride(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    stride[i] = size;
    size *= static_cast<std::size_t>(radix[i]);
  }
  for (std::size_t x = 0; x < size; ++x)
    for (std::size_t i = 0; i < radix.size(); ++i)
      if ((x / stride[i]) % static_cast<std::size_t>(radix[i]) + 1 <
              static_cast<std::size_t>(radix[i]) &&
          table[x + stride[i]] < table[x] - tol)
        return false;
  return true;
}

// ---------------------------------------------------------------------------
// MUI

/// (prod(1 + k k_i) - 1) / k - 1, evaluated without cancellation near 0.
inline double mui_residual_scaled(double k, const std::vector<double>& ks) {
  double p = 1.0, q = 0.0;
  for (double ki : ks) {
    q += p * ki;
    p *= 1.0 + k * ki;
  }
  return q - 1.0;
}

/// Nonzero root of 1 + k = prod(1 + k k_i), or nullopt when sum k_i = 1 and
/// the only root is 0.
inline std::optional<double> solve_mui_factor(const std::vector<double>& ks) {
  for (double ki : ks)
    if (!(ki > 0.0 && ki < 1.0))
      throw std::invalid_argument("MUI scaling constants must lie in (0,1)");
  double sum = 0.0;
  for (double ki : ks) sum += ki;
  if (std::abs(sum - 1.0) <= 1e-12) return std::nullopt;
  if (ks.size() < 2) throw std::invalid_argument("a single constant admits no MUI factor");
  double lo, hi;
  if (sum < 1.0) {
    lo = 0.0;
    hi = 1.0;
    while (mui_residual_scaled(hi, ks) < 0.0) hi *= 2.0;
  } else {
    lo = -1.0;
    hi = 0.0;
  }
  // The scaled residual is increasing in k on (-1, inf).
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mui_residual_scaled(mid, ks) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// |prod(1 + k k_i) - (1 + k)|.
inline double mui_residual(double k, const std::vector<double>& ks) {
  double p = 1.0;
  for (double ki : ks) p *= 1.0 + k * ki;
  return std::abs(p - (1.0 + k));
}

struct MuiElement {
  std::vector<std::vector<double>> single;  // u_i per attribute, u_i(0)=0, u_i(top)=1
  std::vector<double> scaling;              // k_i
  double k = 0.0;
  std::vector<double> table;
};

/// Multiplicative form: (prod(k k_i u_i(a_i) + 1) - 1) / k.
inline std::vector<double> mui_table(const MuiElement& e, const std::vector<int>& radix) {
  std::size_t size = 1;
  for (int d : radix) size *= static_cast<std::size_t>(d);
  std::vector<double> t(size);
  std::vector<std::size_t> stride(radix.size());
  std::size_t s = 1;
  for (std::size_t i = radix.size(); i-- > 0;) {
    stride[i] = s;
    s *= static_cast<std::size_t>(radix[i]);
  }
  for (std::size_t x = 0; x < size; ++x) {
    double p = 1.0;
    for (std::size_t i = 0; i < radix.size(); ++i) {
      const std::size_t l = (x / stride[i]) % static_cast<std::size_t>(radix[i]);
      p *= e.k * e.scaling[i] * e.single[i][l] + 1.0;
    }
    t[x] = (p - 1.0) / e.k;
  }
  return t;
}

/// Number of (attribute pair, improved levels i > i^ and j > j^, context)
/// cases where u(i,j) - u(i^,j^) fails to exceed (sign > 0, complements) or
/// fall below (sign < 0, substitutes) the sum of the two single improvements
/// [u(i,j^) - u(i^,j^)] + [u(i^,j) - u(i^,j^)].
inline std::size_t interaction_violations(const std::vector<double>& table,
                                          const std::vector<int>& radix, int sign) {
  std::size_t size = 1;
  std::vector<std::size_t> stride(radix.size());
  for (std::size_t i = radix.size(); i-- > 0;) {
    stride[i] = size;
    size *= static_cast<std::size_t>(radix[i]);
  }
  if (table.size() != size) throw std::invalid_argument("interaction_violations: size mismatch");
  std::size_t bad = 0;
  for (std::size_t a = 0; a < radix.size(); ++a)
    for (std::size_t b = a + 1; b < radix.size(); ++b)
      for (std::size_t x = 0; x < size; ++x) {
        // x is the context with both a and b at level 0.
        if ((x / stride[a]) % static_cast<std::size_t>(radix[a]) != 0) continue;
        if ((x / stride[b]) % static_cast<std::size_t>(radix[b]) != 0) continue;
        auto at = [&](std::size_t la, std::size_t lb) {
          return table[x + la * stride[a] + lb * stride[b]];
        };
        for (std::size_t lo_a = 0; lo_a < static_cast<std::size_t>(radix[a]); ++lo_a)
          for (std::size_t hi_a = lo_a + 1; hi_a < static_cast<std::size_t>(radix[a]); ++hi_a)
            for (std::size_t lo_b = 0; lo_b < static_cast<std::size_t>(radix[b]); ++lo_b)
              for (std::size_t hi_b = lo_b + 1; hi_b < static_cast<std::size_t>(radix[b]); ++hi_b) {
                const double base = at(lo_a, lo_b);
                const double joint = at(hi_a, hi_b) - base;
                const double parts = (at(hi_a, lo_b) - base) + (at(lo_a, hi_b) - base);
                const bool ok = sign > 0 ? joint > parts : joint < parts;
                if (!ok) ++bad;
              }
      }
  return bad;
}

/// Random increasing single-attribute table over d levels from 0 to 1.
inline std::vector<double> draw_single_utility(int d, Rng& rng) {
  std::vector<double> u(static_cast<std::size_t>(d));
  if (d == 1) return {0.0};
  std::vector<double> inner(static_cast<std::size_t>(d - 2));
  for (double& x : inner) x = rng.uniform();
  std::sort(inner.begin(), inner.end());
  u.front() = 0.0;
  for (std::size_t i = 0; i < inner.size(); ++i) u[i + 1] = inner[i];
  u.back() = 1.0;
  return u;
}

/// Draws single-attribute utilities and scaling constants whose MUI factor
/// is `target_k`: random initial constants are scaled by a common multiplier
/// found by bisection (the factor decreases as the constants grow).
inline MuiElement gen_mui_subutility(const std::vector<int>& radix, double target_k,
                                     Rng& rng) {
  if (radix.size() < 2) throw std::invalid_argument("MUI element needs two attributes");
  if (target_k == 0.0) throw std::invalid_argument("MUI factor must be nonzero");
  if (!(target_k > -1.0))
    throw std::invalid_argument("MUI factor " + std::to_string(target_k) + " is unreachable");
  MuiElement e;
  for (int d : radix) e.single.push_back(draw_single_utility(d, rng));
  std::vector<double> base(radix.size());
  for (double& b : base) b = 0.05 + 0.95 * rng.uniform();
  const double top = *std::max_element(base.begin(), base.end());

  auto factor = [&](double mult) {
    std::vector<double> ks(base.size());
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = std::min(mult * base[i], 1.0 - 1e-15);
    auto k = solve_mui_factor(ks);
    return std::make_pair(k ? *k : 0.0, ks);
  };
  double lo = 0.0, hi = 1.0 / top;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    if (factor(mid).first > target_k) lo = mid;
    else hi = mid;
  }
  auto [k, ks] = factor(0.5 * (lo + hi));
  if (k == 0.0 || std::abs(k - target_k) > 1e-6 * std::max(1.0, std::abs(target_k)))
    throw std::invalid_argument("MUI factor " + std::to_string(target_k) +
                                " is unreachable for this element");
  e.scaling = ks;
  e.k = k;
  e.table = mui_table(e, radix);
  return e;
}

// ---------------------------------------------------------------------------
// Subutilities, constituents, weights

/// Local tables, one per element.  Uniform mode: i.i.d. U[0,1], except that
/// for each tree edge the child's separator slice (non-separator attributes
/// at the reference level 0) is copied from the parent's slice, so both
/// share the values drawn once.  FOPI mode: uniform tables sorted to be
/// monotone.  MUI modes: multiplicative tables with factor k (single-
/// attribute elements get a random increasing table).
inline std::vector<std::vector<double>> draw_subutilities(const GaiLayout& layout,
                                                          GenMode mode, double k,
                                                          Rng& rng) {
  const std::size_t g = layout.element_count();
  std::vector<std::vector<double>> u(g);
  const auto& st = layout.structure();
  for (std::size_t r : st.traversal_order()) {
    const auto& el = layout.element(r);
    if (mode == GenMode::kMui || mode == GenMode::kMuiFopi) {
      if (el.attrs.size() == 1) u[r] = draw_single_utility(el.radix[0], rng);
      else u[r] = gen_mui_subutility(el.radix, k, rng).table;
      continue;
    }
    u[r].resize(el.size);
    for (double& v : u[r]) v = rng.uniform();
    if (mode == GenMode::kFopi) u[r] = enforce_fopi(std::move(u[r]), el.radix);
  }
  if (mode == GenMode::kRandom) {
    for (std::size_t r : st.traversal_order()) {
      auto p = st.parent(r);
      if (!p) continue;
      const auto& sep = layout.separator(r);
      const auto& pe = layout.element(*p);
      const auto& ce = layout.element(r);
      // Slice entries: every non-separator attribute at level 0.
      auto on_slice = [&](const GaiLayout::Element& e, std::size_t el_index, std::size_t x) {
        for (std::size_t i = 0; i < e.attrs.size(); ++i) {
          if (std::binary_search(sep.attrs.begin(), sep.attrs.end(), e.attrs[i])) continue;
          if (layout.level(el_index, x, i) != 0) return false;
        }
        return true;
      };
      std::vector<double> slice(sep.size, 0.0);
      for (std::size_t y = 0; y < pe.size; ++y)
        if (on_slice(pe, *p, y)) slice[sep.parent_to_sep[y]] = u[*p][y];
      for (std::size_t x = 0; x < ce.size; ++x)
        if (on_slice(ce, r, x)) u[r][x] = slice[sep.self_to_sep[x]];
    }
  }
  return u;
}

/// Constituents: the first element of the traversal keeps its table; every
/// other element subtracts its own value on the separator slice (for a later
/// root, its value at the reference).  Reference level 0 everywhere.
inline std::vector<std::vector<double>> constituents(
    const std::vector<std::vector<double>>& sub, const GaiLayout& layout) {
  const auto& st = layout.structure();
  const auto& order = st.traversal_order();
  std::vector<std::vector<double>> f(sub.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t r = order[pos];
    const auto& el = layout.element(r);
    f[r] = sub[r];
    if (pos == 0) continue;
    std::vector<std::size_t> sep;
    if (auto p = st.parent(r)) sep = layout.separator(r).attrs;
    for (std::size_t x = 0; x < el.size; ++x) {
      std::size_t y = 0;  // x with non-separator attributes at 0
      for (std::size_t i = 0; i < el.attrs.size(); ++i)
        if (std::binary_search(sep.begin(), sep.end(), el.attrs[i]))
          y += static_cast<std::size_t>(layout.level(r, x, i)) * el.stride[i];
      f[r][x] = sub[r][x] - sub[r][y];
    }
  }
  return f;
}

/// Uniform point on the simplex.
inline std::vector<double> draw_lambdas(std::size_t g, Rng& rng) {
  if (g == 0) throw std::invalid_argument("draw_lambdas: g must be positive");
  if (g == 1) return {1.0};
  return rng.simplex(g);
}

/// Affine map of f onto [mean - sigma, mean + sigma]; the shift goes into the
/// first element's table.
inline GaiFunction scale_trader(const GaiFunction& f, double mean, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("scale_trader: sigma must be positive");
  auto [lo, hi] = min_max_range(f);
  if (!(hi - lo > 0.0)) throw std::invalid_argument("scale_trader: constant function");
  const double a = 2.0 * sigma / (hi - lo);
  const double b = mean - sigma - a * lo;
  std::vector<double> v(f.values().begin(), f.values().end());
  for (double& x : v) x *= a;
  const auto& e0 = f.layout().element(0);
  for (std::size_t x = 0; x < e0.size; ++x) v[e0.offset + x] += b;
  return GaiFunction(f.layout_ptr(), std::move(v));
}

struct GeneratedTrader {
  GaiFunction function;
  std::vector<std::vector<double>> subutilities;
  std::vector<std::vector<double>> constituents;
  std::vector<double> lambdas;
};

/// Full pipeline.  In FOPI mode the weighted constituents are sorted as well,
/// so that the resulting function is monotone in every attribute.
inline GeneratedTrader generate_trader_detailed(const LayoutPtr& layout, const GenSpec& spec) {
  Rng rng(spec.seed);
  GeneratedTrader out;
  out.subutilities = draw_subutilities(*layout, spec.mode, spec.mui_k, rng);
  out.constituents = constituents(out.subutilities, *layout);
  if (spec.mode == GenMode::kFopi)
    for (std::size_t r = 0; r < out.constituents.size(); ++r)
      out.constituents[r] = enforce_fopi(std::move(out.constituents[r]), layout->element(r).radix);
  out.lambdas = draw_lambdas(layout->element_count(), rng);
  std::vector<std::vector<double>> tables = out.constituents;
  for (std::size_t r = 0; r < tables.size(); ++r)
    for (double& x : tables[r]) x *= out.lambdas[r];
  out.function = scale_trader(GaiFunction(layout, tables), spec.mean, spec.sigma);
  return out;
}

inline GaiFunction generate_trader(const LayoutPtr& layout, const GenSpec& spec) {
  return generate_trader_detailed(layout, spec).function;
}

// ---------------------------------------------------------------------------
// Structure shapes

struct TreeShape {
  std::size_t elements = 1;      // e + 1
  std::size_t element_size = 2;  // xi
  std::size_t separator = 1;     // attributes shared with the parent
  std::size_t max_children = 3;
  /// Size of the first element, when different (0 = element_size).
  std::size_t root_size = 0;
};

/// Breadth-first tree: element r > 0 hangs under (r - 1) / max_children and
/// shares `separator` attributes of its parent (the parent's last ones),
/// adding fresh attributes up to element_size.  With element_size 1 the
/// elements are singletons joined by empty-separator edges.
inline GaiStructure tree_structure(const TreeShape& s) {
  if (s.elements == 0 || s.element_size == 0 || s.max_children == 0)
    throw std::invalid_argument("tree_structure: empty shape");
  const std::size_t root = s.root_size ? s.root_size : s.element_size;
  const std::size_t sep = std::min(s.separator, s.element_size - 1);
  std::vector<std::vector<std::size_t>> el;
  std::vector<GaiStructure::Edge> edges;
  std::size_t next_attr = 0;
  el.emplace_back();
  for (std::size_t i = 0; i < root; ++i) el[0].push_back(next_attr++);
  for (std::size_t r = 1; r < s.elements; ++r) {
    const std::size_t p = (r - 1) / s.max_children;
    std::vector<std::size_t> e;
    const std::size_t take = std::min(sep, el[p].size());
    // Prefer parent attributes not already handed to a sibling.
    const std::size_t child_rank = (r - 1) % s.max_children;
    for (std::size_t i = 0; i < take; ++i)
      e.push_back(el[p][(el[p].size() - 1 - ((child_rank * take + i) % el[p].size()))]);
    while (e.size() < s.element_size) e.push_back(next_attr++);
    el.push_back(e);
    edges.emplace_back(p, r);
  }
  return GaiStructure(next_attr, std::move(el), std::move(edges));
}

/// Random junction forest: each new element either starts a new tree (with
/// probability new_tree_prob) or hangs under a random existing element,
/// sharing a random non-empty proper subset of at most max_separator of its
/// attributes, and adds at least one fresh attribute.  Element sizes are at
/// most max_size.
inline GaiStructure random_forest(std::size_t elements, std::size_t max_size,
                                  std::size_t max_separator, double new_tree_prob,
                                  Rng& rng) {
  if (elements == 0 || max_size == 0) throw std::invalid_argument("random_forest: empty");
  std::vector<std::vector<std::size_t>> el;
  std::vector<GaiStructure::Edge> edges;
  std::size_t next_attr = 0;
  auto fresh = [&](std::vector<std::size_t>& e, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) e.push_back(next_attr++);
  };
  for (std::size_t r = 0; r < elements; ++r) {
    const std::size_t size = 1 + rng.below(max_size);
    std::vector<std::size_t> e;
    if (r == 0 || size == 1 || rng.uniform() < new_tree_prob) {
      fresh(e, size);
      el.push_back(e);
      if (r > 0 && rng.uniform() < 0.5) {
        // Empty-separator edge keeps the element in an existing tree.
        edges.emplace_back(rng.below(r), r);
      }
      continue;
    }
    const std::size_t p = rng.below(r);
    std::vector<std::size_t> pool = el[p];
    const std::size_t cap = std::min({max_separator, pool.size(), size - 1});
    const std::size_t share = cap == 0 ? 0 : 1 + rng.below(cap);
    for (std::size_t i = 0; i < share; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
      e.push_back(pool[i]);
    }
    fresh(e, size - share);
    el.push_back(e);
    edges.emplace_back(p, r);
  }
  return GaiStructure(next_attr, std::move(el), std::move(edges));
}

}  // namespace gaiauction

#endif  // GAIAUCTION_UTILITY_GEN_HPP
