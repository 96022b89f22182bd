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

#ifndef GAIAUCTION_DECOMPOSITION_HPP
#define GAIAUCTION_DECOMPOSITION_HPP

/// \file decomposition.hpp
///
/// From a tabular willingness-to-pay function to a GAI decomposition:
/// pairwise conditional difference independence (CDI) tests, the CDI map,
/// a min-fill tree decomposition of the map, and the functional
/// constituents f_r relative to a reference outcome.

#include <gaiauction/core_model.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gaiauction {

/// Undirected graph over attributes; an edge means CDI was not established.
class CdiMap {
 public:
  CdiMap() = default;
  explicit CdiMap(std::size_t n) : n_(n), adj_(n, std::vector<char>(n, 0)) {}

  std::size_t attribute_count() const { return n_; }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("CDI map has no self-loops");
    adj_.at(a).at(b) = adj_.at(b).at(a) = 1;
  }
  bool has_edge(std::size_t a, std::size_t b) const { return adj_[a][b] != 0; }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = a + 1; b < n_; ++b)
        if (adj_[a][b]) out.emplace_back(a, b);
    return out;
  }

  /// Every element of s induces a clique.
  static CdiMap from_structure(const GaiStructure& s) {
    CdiMap m(s.attribute_count());
    for (const auto& el : s.elements())
      for (std::size_t i = 0; i < el.size(); ++i)
        for (std::size_t j = i + 1; j < el.size(); ++j) m.add_edge(el[i], el[j]);
    return m;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<char>> adj_;
};

/// CDI({x},{y}): for every context Z' of the remaining attributes and every
/// pair of levels of x and of y,
///   u(x1,y1,Z') - u(x2,y1,Z') == u(x1,y2,Z') - u(x2,y2,Z')   (within tol).
inline bool cdi_holds(const TabularFunction& u, std::size_t x, std::size_t y,
                      double tol = 1e-6) {
  if (x == y) throw std::invalid_argument("cdi_holds needs two attributes");
  const auto& schema = u.schema();
  const int dx = schema.domain_size(x), dy = schema.domain_size(y);
  const std::size_t sx = u.stride(x), sy = u.stride(y);
  for (std::size_t base = 0; base < u.size(); ++base) {
    // Contexts are the cells with x and y at level 0.
    if ((base / sx) % static_cast<std::size_t>(dx) != 0) continue;
    if ((base / sy) % static_cast<std::size_t>(dy) != 0) continue;
    for (int x1 = 0; x1 < dx; ++x1)
      for (int x2 = x1 + 1; x2 < dx; ++x2)
        for (int y1 = 0; y1 < dy; ++y1)
          for (int y2 = y1 + 1; y2 < dy; ++y2) {
            auto at = [&](int lx, int ly) {
              return u.at(base + static_cast<std::size_t>(lx) * sx +
                          static_cast<std::size_t>(ly) * sy);
            };
            const double d1 = at(x1, y1) - at(x2, y1);
            const double d2 = at(x1, y2) - at(x2, y2);
            if (std::abs(d1 - d2) > tol) return false;
          }
  }
  return true;
}

/// Complete graph minus every pair for which pairwise CDI holds.
inline CdiMap build_cdi_map(const TabularFunction& u, double tol = 1e-6) {
  const std::size_t n = u.schema().size();
  CdiMap m(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (!cdi_holds(u, a, b, tol)) m.add_edge(a, b);
  return m;
}

/// Tree decomposition by min-fill elimination (ties to the smallest
/// attribute index); elimination cliques that are maximal become elements,
/// joined by a maximum-weight spanning forest on separator sizes.  Edges of
/// weight zero are never used, so each connected component of the map gets
/// its own tree and isolated attributes become singleton elements.
inline GaiStructure tree_decompose(const CdiMap& m) {
  const std::size_t n = m.attribute_count();
  std::vector<std::set<std::size_t>> adj(n);
  for (const auto& [a, b] : m.edges()) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<char> eliminated(n, 0);
  std::vector<std::vector<std::size_t>> cliques;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    std::size_t best_fill = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      std::size_t fill = 0;
      for (auto i = adj[v].begin(); i != adj[v].end(); ++i)
        for (auto j = std::next(i); j != adj[v].end(); ++j)
          if (!adj[*i].count(*j)) ++fill;
      if (best == n || fill < best_fill) {
        best = v;
        best_fill = fill;
      }
    }
    std::vector<std::size_t> clique(adj[best].begin(), adj[best].end());
    clique.push_back(best);
    std::sort(clique.begin(), clique.end());
    for (auto i = adj[best].begin(); i != adj[best].end(); ++i)
      for (auto j = std::next(i); j != adj[best].end(); ++j) {
        adj[*i].insert(*j);
        adj[*j].insert(*i);
      }
    for (std::size_t u : adj[best]) adj[u].erase(best);
    adj[best].clear();
    eliminated[best] = 1;
    cliques.push_back(std::move(clique));
  }

  std::vector<std::vector<std::size_t>> maximal;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cliques.size() && !dominated; ++j) {
      if (i == j) continue;
      if (detail::includes(cliques[j], cliques[i]) &&
          (cliques[j].size() > cliques[i].size() || j < i))
        dominated = true;
    }
    if (!dominated) maximal.push_back(cliques[i]);
  }
  std::sort(maximal.begin(), maximal.end());

  struct Candidate {
    std::size_t weight, a, b;
  };
  std::vector<Candidate> cand;
  for (std::size_t a = 0; a < maximal.size(); ++a)
    for (std::size_t b = a + 1; b < maximal.size(); ++b) {
      const std::size_t w = detail::intersect(maximal[a], maximal[b]).size();
      if (w > 0) cand.push_back({w, a, b});
    }
  std::stable_sort(cand.begin(), cand.end(), [](const Candidate& x, const Candidate& y) {
    return x.weight > y.weight;
  });
  std::vector<std::size_t> uf(maximal.size());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](std::size_t x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<GaiStructure::Edge> edges;
  for (const auto& c : cand) {
    const std::size_t ra = find(c.a), rb = find(c.b);
    if (ra == rb) continue;
    uf[ra] = rb;
    edges.emplace_back(c.a, c.b);
  }
  return GaiStructure(n, std::move(maximal), std::move(edges));
}

/// Tree decomposition of the union of the two structures' clique graphs.
inline GaiStructure merge_structures(const GaiStructure& s1, const GaiStructure& s2) {
  if (s1.attribute_count() != s2.attribute_count())
    throw std::invalid_argument("merge_structures: schemas differ");
  CdiMap m = CdiMap::from_structure(s1);
  for (const auto& el : s2.elements())
    for (std::size_t i = 0; i < el.size(); ++i)
      for (std::size_t j = i + 1; j < el.size(); ++j) m.add_edge(el[i], el[j]);
  return tree_decompose(m);
}

class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(const std::string& what, double error)
      : std::runtime_error(what), max_error(error) {}
  double max_error;
};

/// max_theta |f(theta) - u(theta)|.
inline double reconstruction_error(const TabularFunction& u, const GaiFunction& f) {
  double err = 0.0;
  Configuration c(std::vector<Level>(u.schema().size(), 0));
  std::size_t x = 0;
  do {
    err = std::max(err, std::abs(f.evaluate(c) - u.at(x)));
    ++x;
  } while (next_configuration(u.schema(), c));
  return err;
}

/// GAI constituents relative to a reference outcome.  Elements are visited
/// in root-to-leaf order, where the alternating sum collapses to
///   f_r = u([I_r]) - u([I_r ∩ I_parent(r)])
/// (with an empty separator for every root after the first), and [S] sets
/// all attributes outside S to the reference levels.
inline GaiFunction gai_constituents(const TabularFunction& u, const GaiStructure& s,
                                    const Configuration& ref, double tol = 1e-6) {
  if (!is_valid(u.schema(), ref))
    throw std::invalid_argument("invalid reference outcome");
  auto layout = make_layout(u.schema(), s);
  GaiFunction f(layout);
  const auto& order = s.traversal_order();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t r = order[pos];
    const auto& el = layout->element(r);
    std::vector<std::size_t> sep;
    if (auto p = s.parent(r)) sep = detail::intersect(el.attrs, s.element(*p));
    const bool first = pos == 0;
    auto table = f.mutable_table(r);
    Configuration c = ref;
    Configuration cs = ref;
    for (std::size_t x = 0; x < el.size; ++x) {
      for (std::size_t k = 0; k < el.attrs.size(); ++k)
        c[el.attrs[k]] = layout->level(r, x, k);
      double v = u(c);
      if (!first) {
        for (std::size_t a : sep) cs[a] = c[a];
        v -= u(cs);
      }
      table[x] = v;
    }
  }
  const double err = reconstruction_error(u, f);
  if (err > tol)
    throw DecompositionError(
        "structure does not separate the function (max error " +
            std::to_string(err) + ")",
        err);
  return f;
}

inline GaiFunction gai_constituents(const TabularFunction& u, const GaiStructure& s,
                                    double tol = 1e-6) {
  return gai_constituents(u, s, Configuration(std::vector<Level>(u.schema().size(), 0)),
                          tol);
}

}  // namespace gaiauction

#endif  // GAIAUCTION_DECOMPOSITION_HPP
