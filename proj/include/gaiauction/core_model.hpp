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

#ifndef GAIAUCTION_CORE_MODEL_HPP
#define GAIAUCTION_CORE_MODEL_HPP

/// \file core_model.hpp
///
/// Attribute schemas, configurations, GAI structures and GAI-decomposed
/// value functions.
///
/// A GAI function over attributes a_1..a_n is a sum of local tables, one per
/// element I_r (a subset of the attributes):  u(theta) = sum_r f_r(theta_r).
/// Elements are arranged as a junction forest; every table is stored densely
/// with the element's attributes in schema order and the first attribute most
/// significant, so table order coincides with lexicographic order of
/// sub-configurations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gaiauction {

/// Absolute tolerance used for every equality and threshold comparison.
inline constexpr double kTolerance = 1e-9;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Level = int;

struct Attribute {
  std::string name;
  std::vector<std::string> levels;
};

class AttributeSchema {
 public:
  AttributeSchema() = default;

  explicit AttributeSchema(std::vector<Attribute> attributes)
      : attributes_(std::move(attributes)) {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (attributes_[i].levels.empty()) {
        throw std::invalid_argument("attribute '" + attributes_[i].name +
                                    "' has an empty domain");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (attributes_[j].name == attributes_[i].name) {
          throw std::invalid_argument("duplicate attribute name '" +
                                      attributes_[i].name + "'");
        }
      }
    }
  }

  /// n attributes named x0..x{n-1}, each with levels "0".."d-1".
  static AttributeSchema uniform(std::size_t n, int d) {
    std::vector<Attribute> attrs;
    attrs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Attribute a{"x" + std::to_string(i), {}};
      for (int l = 0; l < d; ++l) a.levels.push_back(std::to_string(l));
      attrs.push_back(std::move(a));
    }
    return AttributeSchema(std::move(attrs));
  }

  static AttributeSchema with_domains(const std::vector<int>& domains) {
    std::vector<Attribute> attrs;
    for (std::size_t i = 0; i < domains.size(); ++i) {
      Attribute a{"x" + std::to_string(i), {}};
      for (int l = 0; l < domains[i]; ++l) a.levels.push_back(std::to_string(l));
      attrs.push_back(std::move(a));
    }
    return AttributeSchema(std::move(attrs));
  }

  std::size_t size() const { return attributes_.size(); }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  int domain_size(std::size_t i) const {
    return static_cast<int>(attributes_[i].levels.size());
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i)
      if (attributes_[i].name == name) return i;
    return std::nullopt;
  }

  /// |Theta| as a double (may exceed 64-bit range for wide schemas).
  double cell_count() const {
    double c = 1.0;
    for (std::size_t i = 0; i < size(); ++i) c *= domain_size(i);
    return c;
  }

  bool operator==(const AttributeSchema& o) const {
    if (size() != o.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (attributes_[i].name != o.attributes_[i].name ||
          attributes_[i].levels != o.attributes_[i].levels)
        return false;
    }
    return true;
  }

 private:
  std::vector<Attribute> attributes_;
};

/// One domain index per attribute, in schema order.  Ordered
/// lexicographically, which is the tie-breaking order used everywhere.
struct Configuration {
  std::vector<Level> levels;

  Configuration() = default;
  explicit Configuration(std::vector<Level> l) : levels(std::move(l)) {}
  Configuration(std::initializer_list<Level> l) : levels(l) {}

  std::size_t size() const { return levels.size(); }
  Level operator[](std::size_t i) const { return levels[i]; }
  Level& operator[](std::size_t i) { return levels[i]; }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.levels == b.levels;
  }
  friend bool operator<(const Configuration& a, const Configuration& b) {
    return a.levels < b.levels;
  }
};

inline bool is_valid(const AttributeSchema& schema, const Configuration& c) {
  if (c.size() != schema.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] < 0 || c[i] >= schema.domain_size(i)) return false;
  return true;
}

/// Advances `c` to the next configuration in lexicographic order; returns
/// false after the last one.
inline bool next_configuration(const AttributeSchema& schema, Configuration& c) {
  for (std::size_t i = c.size(); i-- > 0;) {
    if (++c[i] < schema.domain_size(i)) return true;
    c[i] = 0;
  }
  return false;
}

inline std::string to_string(const AttributeSchema& schema,
                             const Configuration& c) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ' ';
    s += schema.attribute(i).name + "=" +
         schema.attribute(i).levels.at(static_cast<std::size_t>(c[i]));
  }
  return s;
}

// ---------------------------------------------------------------------------
// GAI structure

enum class ViolationKind {
  kBadElement,          // empty element or attribute index out of range
  kBadEdge,             // self-loop, duplicate or out-of-range endpoint
  kCoverage,            // attribute in no element
  kCycle,               // tree edges contain a cycle
  kRunningIntersection  // shared attribute missing on the connecting path
};

struct StructureViolation {
  ViolationKind kind;
  std::string message;
};

class GaiStructure {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  GaiStructure() = default;

  GaiStructure(std::size_t attribute_count,
               std::vector<std::vector<std::size_t>> elements,
               std::vector<Edge> edges = {})
      : attribute_count_(attribute_count),
        elements_(std::move(elements)),
        edges_(std::move(edges)) {
    for (auto& e : elements_) {
      std::sort(e.begin(), e.end());
      e.erase(std::unique(e.begin(), e.end()), e.end());
    }
    for (auto& [a, b] : edges_)
      if (a > b) std::swap(a, b);
    derive();
  }

  /// Each attribute its own element, no edges.
  static GaiStructure singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> el(n);
    for (std::size_t i = 0; i < n; ++i) el[i] = {i};
    return GaiStructure(n, std::move(el));
  }

  std::size_t attribute_count() const { return attribute_count_; }
  std::size_t element_count() const { return elements_.size(); }
  const std::vector<std::vector<std::size_t>>& elements() const {
    return elements_;
  }
  const std::vector<std::size_t>& element(std::size_t r) const {
    return elements_.at(r);
  }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Trees G_1..G_h; each lists its element indices in ascending order.
  const std::vector<std::vector<std::size_t>>& components() const {
    return components_;
  }
  std::size_t component_of(std::size_t r) const { return component_of_[r]; }
  std::size_t tree_size(std::size_t j) const { return components_[j].size(); }
  std::size_t tree_edge_count(std::size_t j) const {
    return components_[j].size() - 1;
  }
  /// e = max_j e_j.
  std::size_t connectivity() const {
    std::size_t e = 0;
    for (std::size_t j = 0; j < components_.size(); ++j)
      e = std::max(e, tree_edge_count(j));
    return e;
  }
  std::size_t max_element_size() const {
    std::size_t x = 0;
    for (const auto& e : elements_) x = std::max(x, e.size());
    return x;
  }

  /// Parent in the BFS rooting of each tree (root = smallest element index).
  std::optional<std::size_t> parent(std::size_t r) const {
    if (parent_[r] < 0) return std::nullopt;
    return static_cast<std::size_t>(parent_[r]);
  }
  const std::vector<std::size_t>& children(std::size_t r) const {
    return children_[r];
  }
  /// Root-to-leaf order: trees in component order, BFS inside each tree.
  const std::vector<std::size_t>& traversal_order() const { return order_; }

  bool has_cycle() const { return has_cycle_; }

  friend bool operator==(const GaiStructure& a, const GaiStructure& b) {
    auto ea = a.edges_, eb = b.edges_;
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    return a.attribute_count_ == b.attribute_count_ &&
           a.elements_ == b.elements_ && ea == eb;
  }

 private:
  void derive() {
    const std::size_t g = elements_.size();
    std::vector<std::vector<std::size_t>> adj(g);
    for (const auto& [a, b] : edges_) {
      if (a < g && b < g && a != b) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());

    parent_.assign(g, -1);
    children_.assign(g, {});
    component_of_.assign(g, 0);
    components_.clear();
    order_.clear();
    has_cycle_ = false;
    std::vector<char> seen(g, 0);
    for (std::size_t root = 0; root < g; ++root) {
      if (seen[root]) continue;
      std::vector<std::size_t> comp;
      std::queue<std::size_t> q;
      q.push(root);
      seen[root] = 1;
      std::size_t edge_endpoints = 0;
      while (!q.empty()) {
        std::size_t r = q.front();
        q.pop();
        comp.push_back(r);
        order_.push_back(r);
        component_of_[r] = components_.size();
        edge_endpoints += adj[r].size();
        for (std::size_t c : adj[r]) {
          if (seen[c]) continue;
          seen[c] = 1;
          parent_[c] = static_cast<long>(r);
          children_[r].push_back(c);
          q.push(c);
        }
      }
      if (edge_endpoints / 2 != comp.size() - 1) has_cycle_ = true;
      std::sort(comp.begin(), comp.end());
      components_.push_back(std::move(comp));
    }
  }

  std::size_t attribute_count_ = 0;
  std::vector<std::vector<std::size_t>> elements_;
  std::vector<Edge> edges_;
  std::vector<long> parent_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> component_of_;
  std::vector<std::vector<std::size_t>> components_;
  std::vector<std::size_t> order_;
  bool has_cycle_ = false;
};

namespace detail {

inline std::vector<std::size_t> intersect(const std::vector<std::size_t>& a,
                                          const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline bool includes(const std::vector<std::size_t>& super,
                     const std::vector<std::size_t>& sub) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline std::string set_string(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

}  // namespace detail

/// Checks coverage, acyclicity and running intersection.  Elements of
/// different trees must not share attributes (there is no path between
/// them on which the shared attribute could appear).
inline std::vector<StructureViolation> validate_structure(const GaiStructure& s) {
  std::vector<StructureViolation> out;
  const std::size_t n = s.attribute_count();
  const std::size_t g = s.element_count();

  std::vector<char> covered(n, 0);
  for (std::size_t r = 0; r < g; ++r) {
    const auto& el = s.element(r);
    if (el.empty()) {
      out.push_back({ViolationKind::kBadElement,
                     "element " + std::to_string(r) + " is empty"});
    }
    for (std::size_t a : el) {
      if (a >= n) {
        out.push_back({ViolationKind::kBadElement,
                       "element " + std::to_string(r) +
                           " references attribute " + std::to_string(a)});
      } else {
        covered[a] = 1;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!covered[a]) {
      out.push_back({ViolationKind::kCoverage,
                     "attribute " + std::to_string(a) + " is in no element"});
    }
  }

  std::vector<GaiStructure::Edge> seen_edges;
  for (const auto& e : s.edges()) {
    if (e.first >= g || e.second >= g || e.first == e.second) {
      out.push_back({ViolationKind::kBadEdge,
                     "invalid edge (" + std::to_string(e.first) + "," +
                         std::to_string(e.second) + ")"});
    } else if (std::find(seen_edges.begin(), seen_edges.end(), e) !=
               seen_edges.end()) {
      out.push_back({ViolationKind::kBadEdge,
                     "duplicate edge (" + std::to_string(e.first) + "," +
                         std::to_string(e.second) + ")"});
    }
    seen_edges.push_back(e);
  }
  if (s.has_cycle()) {
    out.push_back({ViolationKind::kCycle, "tree edges contain a cycle"});
    return out;  // paths are undefined
  }

  auto path = [&](std::size_t i, std::size_t k) {
    // Elements strictly between i and k on the tree path.
    std::vector<std::size_t> up_i, up_k;
    for (std::optional<std::size_t> x = i; x; x = s.parent(*x)) up_i.push_back(*x);
    for (std::optional<std::size_t> x = k; x; x = s.parent(*x)) up_k.push_back(*x);
    while (up_i.size() > 1 && up_k.size() > 1 &&
           up_i[up_i.size() - 2] == up_k[up_k.size() - 2]) {
      up_i.pop_back();
      up_k.pop_back();
    }
    std::vector<std::size_t> mid(up_i.begin() + 1, up_i.end());
    if (up_k.size() > 1) mid.insert(mid.end(), up_k.begin() + 1, up_k.end() - 1);
    return mid;
  };

  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t k = i + 1; k < g; ++k) {
      auto shared = detail::intersect(s.element(i), s.element(k));
      if (shared.empty()) continue;
      if (s.component_of(i) != s.component_of(k)) {
        out.push_back({ViolationKind::kRunningIntersection,
                       "elements " + std::to_string(i) + " and " +
                           std::to_string(k) + " share " +
                           detail::set_string(shared) +
                           " but lie in different trees"});
        continue;
      }
      for (std::size_t j : path(i, k)) {
        if (!detail::includes(s.element(j), shared)) {
          out.push_back({ViolationKind::kRunningIntersection,
                         "element " + std::to_string(j) + " on the path " +
                             std::to_string(i) + "-" + std::to_string(k) +
                             " misses " + detail::set_string(shared)});
        }
      }
    }
  }
  return out;
}

struct SubConfiguration {
  std::size_t element = 0;
  std::vector<Level> assignment;  // element attributes in schema order

  friend bool operator==(const SubConfiguration& a, const SubConfiguration& b) {
    return a.element == b.element && a.assignment == b.assignment;
  }
  friend bool operator<(const SubConfiguration& a, const SubConfiguration& b) {
    if (a.element != b.element) return a.element < b.element;
    return a.assignment < b.assignment;
  }
};

/// Global index of a sub-configuration in the concatenation of all element
/// tables (the set of all sub-configurations).
using SubConfigId = std::size_t;

// ---------------------------------------------------------------------------
// Layout: schema + validated structure + precomputed index arithmetic.

class GaiLayout {
 public:
  struct Element {
    std::vector<std::size_t> attrs;
    std::vector<int> radix;
    std::vector<std::size_t> stride;
    std::size_t size = 1;
    std::size_t offset = 0;
    std::vector<Level> decoded;  // size * attrs.size(), row-major
  };

  /// Separator of a non-first element with the element preceding it in the
  /// traversal (its tree parent, or nothing for later roots).
  struct Separator {
    std::vector<std::size_t> attrs;
    std::size_t size = 1;
    std::vector<std::uint32_t> self_to_sep;    // over the element's table
    std::vector<std::uint32_t> parent_to_sep;  // over the parent's table
  };

  GaiLayout(AttributeSchema schema, GaiStructure structure)
      : schema_(std::move(schema)), structure_(std::move(structure)) {
    if (structure_.attribute_count() != schema_.size()) {
      throw std::invalid_argument("structure/schema attribute count mismatch");
    }
    auto violations = validate_structure(structure_);
    if (!violations.empty()) {
      throw std::invalid_argument("invalid GAI structure: " +
                                  violations.front().message);
    }
    build();
  }

  const AttributeSchema& schema() const { return schema_; }
  const GaiStructure& structure() const { return structure_; }
  std::size_t element_count() const { return elements_.size(); }
  const Element& element(std::size_t r) const { return elements_[r]; }
  const Separator& separator(std::size_t r) const { return separators_[r]; }
  /// |I|, the number of sub-configurations.
  std::size_t total_size() const { return total_; }
  const std::vector<std::size_t>& elements_with(std::size_t attr) const {
    return attr_elements_[attr];
  }
  /// Attributes touched by tree j, ascending.
  const std::vector<std::size_t>& component_attributes(std::size_t j) const {
    return component_attrs_[j];
  }

  std::size_t local_index(std::size_t r, const Configuration& c) const {
    const auto& e = elements_[r];
    std::size_t x = 0;
    for (std::size_t k = 0; k < e.attrs.size(); ++k)
      x += static_cast<std::size_t>(c[e.attrs[k]]) * e.stride[k];
    return x;
  }
  SubConfigId id(std::size_t r, const Configuration& c) const {
    return elements_[r].offset + local_index(r, c);
  }
  SubConfigId id(const SubConfiguration& s) const {
    const auto& e = elements_.at(s.element);
    if (s.assignment.size() != e.attrs.size())
      throw std::invalid_argument("sub-configuration arity mismatch");
    std::size_t x = 0;
    for (std::size_t k = 0; k < e.attrs.size(); ++k) {
      if (s.assignment[k] < 0 || s.assignment[k] >= e.radix[k])
        throw std::out_of_range("sub-configuration level out of range");
      x += static_cast<std::size_t>(s.assignment[k]) * e.stride[k];
    }
    return e.offset + x;
  }
  std::size_t element_of(SubConfigId id) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
    return static_cast<std::size_t>(it - offsets_.begin()) - 1;
  }
  SubConfiguration sub_configuration(SubConfigId id) const {
    std::size_t r = element_of(id);
    const auto& e = elements_[r];
    std::size_t x = id - e.offset;
    SubConfiguration s{r, {}};
    s.assignment.assign(e.decoded.begin() + x * e.attrs.size(),
                        e.decoded.begin() + (x + 1) * e.attrs.size());
    return s;
  }
  /// Level of the k-th attribute of element r in local sub-configuration x.
  Level level(std::size_t r, std::size_t x, std::size_t k) const {
    const auto& e = elements_[r];
    return e.decoded[x * e.attrs.size() + k];
  }

  std::string describe(SubConfigId id) const {
    auto s = sub_configuration(id);
    std::string out;
    const auto& e = elements_[s.element];
    for (std::size_t k = 0; k < e.attrs.size(); ++k) {
      const auto& a = schema_.attribute(e.attrs[k]);
      out += a.name + "=" + a.levels[static_cast<std::size_t>(s.assignment[k])];
      if (k + 1 < e.attrs.size()) out += ',';
    }
    return out;
  }

 private:
  void build() {
    const std::size_t g = structure_.element_count();
    elements_.resize(g);
    offsets_.resize(g);
    attr_elements_.assign(schema_.size(), {});
    total_ = 0;
    for (std::size_t r = 0; r < g; ++r) {
      auto& e = elements_[r];
      e.attrs = structure_.element(r);
      const std::size_t k = e.attrs.size();
      e.radix.resize(k);
      e.stride.resize(k);
      e.size = 1;
      for (std::size_t i = k; i-- > 0;) {
        e.radix[i] = schema_.domain_size(e.attrs[i]);
        e.stride[i] = e.size;
        e.size *= static_cast<std::size_t>(e.radix[i]);
      }
      e.offset = total_;
      offsets_[r] = total_;
      total_ += e.size;
      e.decoded.resize(e.size * k);
      for (std::size_t x = 0; x < e.size; ++x)
        for (std::size_t i = 0; i < k; ++i)
          e.decoded[x * k + i] =
              static_cast<Level>((x / e.stride[i]) % static_cast<std::size_t>(e.radix[i]));
      for (std::size_t a : e.attrs) attr_elements_[a].push_back(r);
    }

    separators_.assign(g, {});
    for (std::size_t r = 0; r < g; ++r) {
      auto p = structure_.parent(r);
      if (!p) continue;
      auto& s = separators_[r];
      s.attrs = detail::intersect(elements_[r].attrs, elements_[*p].attrs);
      s.size = 1;
      std::vector<std::size_t> sep_stride(s.attrs.size());
      for (std::size_t i = s.attrs.size(); i-- > 0;) {
        sep_stride[i] = s.size;
        s.size *= static_cast<std::size_t>(schema_.domain_size(s.attrs[i]));
      }
      auto map_for = [&](std::size_t el) {
        const auto& E = elements_[el];
        std::vector<std::size_t> pos(s.attrs.size());
        for (std::size_t i = 0; i < s.attrs.size(); ++i)
          pos[i] = static_cast<std::size_t>(
              std::find(E.attrs.begin(), E.attrs.end(), s.attrs[i]) - E.attrs.begin());
        std::vector<std::uint32_t> m(E.size);
        for (std::size_t x = 0; x < E.size; ++x) {
          std::size_t si = 0;
          for (std::size_t i = 0; i < s.attrs.size(); ++i)
            si += static_cast<std::size_t>(E.decoded[x * E.attrs.size() + pos[i]]) *
                  sep_stride[i];
          m[x] = static_cast<std::uint32_t>(si);
        }
        return m;
      };
      s.self_to_sep = map_for(r);
      s.parent_to_sep = map_for(*p);
    }

    component_attrs_.assign(structure_.components().size(), {});
    for (std::size_t j = 0; j < structure_.components().size(); ++j) {
      auto& ca = component_attrs_[j];
      for (std::size_t r : structure_.components()[j])
        ca.insert(ca.end(), elements_[r].attrs.begin(), elements_[r].attrs.end());
      std::sort(ca.begin(), ca.end());
      ca.erase(std::unique(ca.begin(), ca.end()), ca.end());
    }
  }

  AttributeSchema schema_;
  GaiStructure structure_;
  std::vector<Element> elements_;
  std::vector<std::size_t> offsets_;
  std::vector<Separator> separators_;
  std::vector<std::vector<std::size_t>> attr_elements_;
  std::vector<std::vector<std::size_t>> component_attrs_;
  std::size_t total_ = 0;
};

using LayoutPtr = std::shared_ptr<const GaiLayout>;

inline LayoutPtr make_layout(AttributeSchema schema, GaiStructure structure) {
  return std::make_shared<const GaiLayout>(std::move(schema), std::move(structure));
}

/// theta restricted to I_r.
inline SubConfiguration project(const GaiLayout& layout, const Configuration& c,
                                std::size_t r) {
  const auto& e = layout.element(r);
  SubConfiguration s{r, {}};
  s.assignment.reserve(e.attrs.size());
  for (std::size_t a : e.attrs) s.assignment.push_back(c[a]);
  return s;
}

/// Global ids of the g projections of c.
inline std::vector<SubConfigId> projection_ids(const GaiLayout& layout,
                                               const Configuration& c) {
  std::vector<SubConfigId> ids(layout.element_count());
  for (std::size_t r = 0; r < ids.size(); ++r) ids[r] = layout.id(r, c);
  return ids;
}

// ---------------------------------------------------------------------------
// GaiFunction

class GaiFunction {
 public:
  GaiFunction() = default;

  /// Zero tables.
  explicit GaiFunction(LayoutPtr layout)
      : layout_(std::move(layout)), values_(layout_->total_size(), 0.0) {}

  GaiFunction(LayoutPtr layout, std::vector<double> flat)
      : layout_(std::move(layout)), values_(std::move(flat)) {
    if (values_.size() != layout_->total_size())
      throw std::invalid_argument("table size mismatch");
    check_finite();
  }

  GaiFunction(LayoutPtr layout, const std::vector<std::vector<double>>& tables)
      : layout_(std::move(layout)) {
    if (tables.size() != layout_->element_count())
      throw std::invalid_argument("expected one table per element");
    values_.reserve(layout_->total_size());
    for (std::size_t r = 0; r < tables.size(); ++r) {
      if (tables[r].size() != layout_->element(r).size)
        throw std::invalid_argument("table " + std::to_string(r) +
                                    " has wrong size");
      values_.insert(values_.end(), tables[r].begin(), tables[r].end());
    }
    check_finite();
  }

  const LayoutPtr& layout_ptr() const { return layout_; }
  const GaiLayout& layout() const { return *layout_; }
  const AttributeSchema& schema() const { return layout_->schema(); }
  const GaiStructure& structure() const { return layout_->structure(); }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }
  std::span<const double> table(std::size_t r) const {
    const auto& e = layout_->element(r);
    return std::span<const double>(values_).subspan(e.offset, e.size);
  }
  std::span<double> mutable_table(std::size_t r) {
    const auto& e = layout_->element(r);
    return std::span<double>(values_).subspan(e.offset, e.size);
  }
  double at(SubConfigId id) const { return values_[id]; }

  std::vector<std::vector<double>> tables() const {
    std::vector<std::vector<double>> out;
    for (std::size_t r = 0; r < layout_->element_count(); ++r) {
      auto t = table(r);
      out.emplace_back(t.begin(), t.end());
    }
    return out;
  }

  double evaluate(const Configuration& c) const {
    double v = 0.0;
    for (std::size_t r = 0; r < layout_->element_count(); ++r)
      v += values_[layout_->id(r, c)];
    return v;
  }

 private:
  void check_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite table entry");
  }

  LayoutPtr layout_;
  std::vector<double> values_;
};

inline double evaluate(const GaiFunction& f, const Configuration& c) {
  return f.evaluate(c);
}

// ---------------------------------------------------------------------------
// Consistent covers

struct CoverConflict {
  std::size_t attribute;
  std::size_t first_element;
  std::size_t second_element;
  Level first_level;
  Level second_level;
};

using ComposeResult = std::variant<Configuration, CoverConflict>;

/// Composes one sub-configuration per element into a configuration, or
/// reports the first attribute on which two of them disagree.
inline ComposeResult compose(const GaiLayout& layout,
                             std::span<const SubConfiguration> subs) {
  const std::size_t n = layout.schema().size();
  std::vector<Level> levels(n, -1);
  std::vector<std::size_t> source(n, 0);
  std::vector<char> seen_element(layout.element_count(), 0);
  std::vector<SubConfiguration> sorted(subs.begin(), subs.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& s : sorted) {
    if (s.element >= layout.element_count())
      throw std::invalid_argument("sub-configuration element out of range");
    if (seen_element[s.element])
      throw std::invalid_argument("two sub-configurations for one element");
    seen_element[s.element] = 1;
    (void)layout.id(s);  // range checks
    const auto& attrs = layout.element(s.element).attrs;
    for (std::size_t k = 0; k < attrs.size(); ++k) {
      std::size_t a = attrs[k];
      if (levels[a] < 0) {
        levels[a] = s.assignment[k];
        source[a] = s.element;
      } else if (levels[a] != s.assignment[k]) {
        return CoverConflict{a, source[a], s.element, levels[a], s.assignment[k]};
      }
    }
  }
  for (std::size_t r = 0; r < seen_element.size(); ++r)
    if (!seen_element[r]) throw std::invalid_argument("missing element in cover");
  for (Level l : levels)
    if (l < 0) throw std::invalid_argument("cover leaves an attribute unassigned");
  return Configuration(std::move(levels));
}

// ---------------------------------------------------------------------------
// TabularFunction: exhaustive table over Theta, for small domains.

class TabularFunction {
 public:
  static constexpr std::size_t kDefaultCellCap = std::size_t{1} << 20;

  TabularFunction() = default;

  TabularFunction(AttributeSchema schema, std::vector<double> values,
                  std::size_t cell_cap = kDefaultCellCap)
      : schema_(std::move(schema)), values_(std::move(values)) {
    const double cells = schema_.cell_count();
    if (cells > static_cast<double>(cell_cap))
      throw std::length_error("tabular function exceeds cell cap");
    if (values_.size() != static_cast<std::size_t>(cells))
      throw std::invalid_argument("tabular value count does not match schema");
    for (double v : values_)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite table entry");
    strides_.resize(schema_.size());
    std::size_t s = 1;
    for (std::size_t i = schema_.size(); i-- > 0;) {
      strides_[i] = s;
      s *= static_cast<std::size_t>(schema_.domain_size(i));
    }
  }

  static TabularFunction from(const GaiFunction& f,
                              std::size_t cell_cap = kDefaultCellCap) {
    const auto& schema = f.schema();
    if (schema.cell_count() > static_cast<double>(cell_cap))
      throw std::length_error("tabular function exceeds cell cap");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(schema.cell_count()));
    Configuration c(std::vector<Level>(schema.size(), 0));
    do {
      values.push_back(f.evaluate(c));
    } while (next_configuration(schema, c));
    return TabularFunction(schema, std::move(values), cell_cap);
  }

  const AttributeSchema& schema() const { return schema_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::size_t stride(std::size_t attr) const { return strides_[attr]; }

  std::size_t index(const Configuration& c) const {
    std::size_t x = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      x += static_cast<std::size_t>(c[i]) * strides_[i];
    return x;
  }
  Configuration decode(std::size_t x) const {
    Configuration c(std::vector<Level>(schema_.size(), 0));
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = static_cast<Level>((x / strides_[i]) %
                                static_cast<std::size_t>(schema_.domain_size(i)));
    return c;
  }
  double operator()(const Configuration& c) const { return values_[index(c)]; }
  double at(std::size_t x) const { return values_[x]; }

 private:
  AttributeSchema schema_;
  std::vector<double> values_;
  std::vector<std::size_t> strides_;
};

}  // namespace gaiauction

#endif  // GAIAUCTION_CORE_MODEL_HPP
