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

#ifndef GAIAUCTION_GAI_OPTIM_HPP
#define GAIAUCTION_GAI_OPTIM_HPP

/// \file gai_optim.hpp
///
/// Exact max-sum optimization over GAI functions by message passing on the
/// junction forest, plus the enumeration machinery built on it: best
/// configuration outside a set of sub-configurations, and the buyer's
/// preferred set.
///
/// Ties are broken towards the lexicographically smallest configuration.
/// The decoder fixes attributes in schema order using max-marginals from a
/// two-pass schedule and only re-runs the passes when an attribute actually
/// has more than one optimal level, so the common tie-free case costs two
/// passes.

#include <gaiauction/core_model.hpp>

#include <cassert>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gaiauction {

struct Assignment {
  Configuration config;
  double value = 0.0;
};

/// Permitted sub-configurations, one flag per entry of the layout.  Entries
/// not permitted are treated as -inf.
class ElementMask {
 public:
  ElementMask() = default;
  explicit ElementMask(const GaiLayout& layout, bool permitted = true)
      : allowed_(layout.total_size(), permitted ? 1 : 0) {}

  void permit(SubConfigId id) { allowed_.at(id) = 1; }
  void forbid(SubConfigId id) { allowed_.at(id) = 0; }
  bool permitted(SubConfigId id) const { return allowed_[id] != 0; }
  std::span<const char> flags() const { return allowed_; }

 private:
  std::vector<char> allowed_;
};

/// Sub-configurations currently in the buyer-preferred set, with the cached
/// per-tree profit maxima.
struct PreferredSet {
  std::vector<char> member;
  std::vector<double> tree_max;  // NaN until computed

  PreferredSet() = default;
  explicit PreferredSet(const GaiLayout& layout)
      : member(layout.total_size(), 0),
        tree_max(layout.structure().components().size(),
                 std::numeric_limits<double>::quiet_NaN()) {}

  bool contains(SubConfigId id) const { return member[id] != 0; }
  std::size_t size() const {
    return static_cast<std::size_t>(std::count(member.begin(), member.end(), 1));
  }
  std::vector<SubConfigId> ids() const {
    std::vector<SubConfigId> out;
    for (std::size_t i = 0; i < member.size(); ++i)
      if (member[i]) out.push_back(i);
    return out;
  }
};

/// Per-element restriction relative to a reference set of sub-configurations.
enum class ElementMode : std::uint8_t { kAny, kInsideOnly, kOutsideOnly };

struct Constraint {
  std::span<const char> allowed;  // empty = everything permitted
  std::span<const char> in_set;   // reference set for the element modes
  std::span<const ElementMode> mode;  // empty = kAny everywhere
};

/// Reusable work buffers for one layout.  Not thread-safe; use one per
/// thread.
class Eliminator {
 public:
  explicit Eliminator(const GaiLayout& layout) : layout_(&layout) {
    const std::size_t g = layout.element_count();
    up_.resize(g);
    full_.resize(g);
    msg_.resize(g);
    down_.resize(g);
    for (std::size_t r = 0; r < g; ++r) {
      up_[r].resize(layout.element(r).size);
      full_[r].resize(layout.element(r).size);
      msg_[r].resize(layout.separator(r).size);
      down_[r].resize(layout.separator(r).size);
    }
    fixed_.assign(layout.schema().size(), -1);
    const auto& comps = layout.structure().components();
    comp_order_.resize(comps.size());
    for (std::size_t r : layout.structure().traversal_order())
      comp_order_[layout.structure().component_of(r)].push_back(r);
  }

  const GaiLayout& layout() const { return *layout_; }

  /// Max of the component restricted to the constraint (upward pass only);
  /// -inf when infeasible.
  double component_max(std::span<const double> factors, std::size_t comp,
                       const Constraint& c = {}) {
    std::fill(fixed_.begin(), fixed_.end(), -1);
    return upward(factors, comp, c);
  }

  /// Sum of the component maxima over all trees.
  double max_value(std::span<const double> factors, const Constraint& c = {}) {
    double total = 0.0;
    for (std::size_t j = 0; j < comp_order_.size(); ++j) {
      double v = component_max(factors, j, c);
      if (v == kNegInf) return kNegInf;
      total += v;
    }
    return total;
  }

  /// Lexicographically smallest maximizer of one tree; writes the tree's
  /// attributes into `config` and returns the tree maximum, or nullopt when
  /// infeasible.
  std::optional<double> component_argmax(std::span<const double> factors,
                                         std::size_t comp, const Constraint& c,
                                         Configuration& config) {
    std::fill(fixed_.begin(), fixed_.end(), -1);
    const double best = upward(factors, comp, c);
    if (best == kNegInf) return std::nullopt;
    downward(comp);
    const auto& attrs = layout_->component_attributes(comp);
    std::vector<double> mm;
    for (std::size_t a : attrs) {
      const std::size_t r0 = layout_->elements_with(a).front();
      const auto& el = layout_->element(r0);
      const std::size_t k = static_cast<std::size_t>(
          std::find(el.attrs.begin(), el.attrs.end(), a) - el.attrs.begin());
      mm.assign(static_cast<std::size_t>(el.radix[k]), kNegInf);
      for (std::size_t x = 0; x < el.size; ++x) {
        const Level l = layout_->level(r0, x, k);
        mm[static_cast<std::size_t>(l)] = std::max(mm[static_cast<std::size_t>(l)], full_[r0][x]);
      }
      int chosen = -1;
      int count = 0;
      for (std::size_t l = 0; l < mm.size(); ++l) {
        if (mm[l] >= best - kTolerance) {
          if (chosen < 0) chosen = static_cast<int>(l);
          ++count;
        }
      }
      if (chosen < 0) {  // numerical fallback
        chosen = static_cast<int>(std::max_element(mm.begin(), mm.end()) - mm.begin());
        count = 2;
      }
      fixed_[a] = chosen;
      config[a] = chosen;
      if (count > 1) {
        upward(factors, comp, c);
        downward(comp);
      }
    }
    return best;
  }

  /// Lexicographically smallest maximizer over all trees.
  std::optional<Assignment> argmax(std::span<const double> factors,
                                   const Constraint& c = {}) {
    Assignment out;
    out.config.levels.assign(layout_->schema().size(), 0);
    for (std::size_t j = 0; j < comp_order_.size(); ++j) {
      auto v = component_argmax(factors, j, c, out.config);
      if (!v) return std::nullopt;
      out.value += *v;
    }
    return out;
  }

  /// Per-entry max-marginals: for every sub-configuration, the best value of
  /// a full configuration containing it (-inf when none is feasible).
  std::vector<double> max_marginals(std::span<const double> factors,
                                    const Constraint& c = {}) {
    std::vector<double> out(layout_->total_size(), kNegInf);
    std::vector<double> tree_max(comp_order_.size());
    double total = 0.0;
    for (std::size_t j = 0; j < comp_order_.size(); ++j) {
      tree_max[j] = component_max(factors, j, c);
      total += tree_max[j];
    }
    if (total == kNegInf) return out;
    for (std::size_t j = 0; j < comp_order_.size(); ++j) {
      std::fill(fixed_.begin(), fixed_.end(), -1);
      upward(factors, j, c);
      downward(j);
      const double rest = total - tree_max[j];
      for (std::size_t r : comp_order_[j]) {
        const auto& el = layout_->element(r);
        for (std::size_t x = 0; x < el.size; ++x)
          out[el.offset + x] = full_[r][x] + rest;
      }
    }
    return out;
  }

  const std::vector<std::size_t>& component_order(std::size_t j) const {
    return comp_order_[j];
  }

 private:
  double entry(std::span<const double> factors, std::size_t r, std::size_t x,
               const Constraint& c) const {
    const auto& el = layout_->element(r);
    const SubConfigId id = el.offset + x;
    if (!c.allowed.empty() && !c.allowed[id]) return kNegInf;
    if (!c.mode.empty()) {
      switch (c.mode[r]) {
        case ElementMode::kAny:
          break;
        case ElementMode::kInsideOnly:
          if (!c.in_set[id]) return kNegInf;
          break;
        case ElementMode::kOutsideOnly:
          if (c.in_set[id]) return kNegInf;
          break;
      }
    }
    for (std::size_t k = 0; k < el.attrs.size(); ++k) {
      const Level f = fixed_[el.attrs[k]];
      if (f >= 0 && layout_->level(r, x, k) != f) return kNegInf;
    }
    return factors[id];
  }

  double upward(std::span<const double> factors, std::size_t comp,
                const Constraint& c) {
    const auto& order = comp_order_[comp];
    const auto& st = layout_->structure();
    for (std::size_t i = order.size(); i-- > 0;) {
      const std::size_t r = order[i];
      const auto& el = layout_->element(r);
      auto& up = up_[r];
      for (std::size_t x = 0; x < el.size; ++x) up[x] = entry(factors, r, x, c);
      for (std::size_t ch : st.children(r)) {
        const auto& map = layout_->separator(ch).parent_to_sep;
        const auto& m = msg_[ch];
        for (std::size_t x = 0; x < el.size; ++x) up[x] += m[map[x]];
      }
      if (st.parent(r)) {
        auto& m = msg_[r];
        std::fill(m.begin(), m.end(), kNegInf);
        const auto& map = layout_->separator(r).self_to_sep;
        for (std::size_t x = 0; x < el.size; ++x)
          if (up[x] > m[map[x]]) m[map[x]] = up[x];
      }
    }
    const auto& root = up_[order.front()];
    return *std::max_element(root.begin(), root.end());
  }

  void downward(std::size_t comp) {
    const auto& order = comp_order_[comp];
    const auto& st = layout_->structure();
    full_[order.front()] = up_[order.front()];
    for (std::size_t r : order) {
      const auto& fr = full_[r];
      for (std::size_t ch : st.children(r)) {
        const auto& sep = layout_->separator(ch);
        auto& dm = down_[ch];
        std::fill(dm.begin(), dm.end(), kNegInf);
        const auto& m = msg_[ch];
        for (std::size_t y = 0; y < fr.size(); ++y) {
          const std::uint32_t s = sep.parent_to_sep[y];
          if (m[s] == kNegInf || fr[y] == kNegInf) continue;
          const double v = fr[y] - m[s];
          if (v > dm[s]) dm[s] = v;
        }
        auto& fc = full_[ch];
        const auto& uc = up_[ch];
        for (std::size_t x = 0; x < fc.size(); ++x)
          fc[x] = uc[x] + dm[sep.self_to_sep[x]];
      }
    }
  }

  const GaiLayout* layout_;
  std::vector<std::vector<double>> up_, full_, msg_, down_;
  std::vector<Level> fixed_;
  std::vector<std::vector<std::size_t>> comp_order_;
};

// ---------------------------------------------------------------------------

/// Adds the tables of a function on layout `source` into the tables of a
/// coarser layout `host` in which every source element is contained in some
/// host element (the first such element receives it).
class FactorMap {
 public:
  FactorMap(const GaiLayout& source, const GaiLayout& host) {
    if (!(source.schema() == host.schema()))
      throw std::invalid_argument("FactorMap: schemas differ");
    for (std::size_t r = 0; r < source.element_count(); ++r) {
      const auto& se = source.element(r);
      std::optional<std::size_t> target;
      for (std::size_t h = 0; h < host.element_count() && !target; ++h)
        if (detail::includes(host.element(h).attrs, se.attrs)) target = h;
      if (!target)
        throw std::invalid_argument("FactorMap: element " + std::to_string(r) +
                                    " fits no host element");
      const auto& he = host.element(*target);
      std::vector<std::size_t> pos(se.attrs.size());
      for (std::size_t k = 0; k < se.attrs.size(); ++k)
        pos[k] = static_cast<std::size_t>(
            std::find(he.attrs.begin(), he.attrs.end(), se.attrs[k]) - he.attrs.begin());
      Part p{*target, se.offset, std::vector<std::uint32_t>(he.size)};
      for (std::size_t x = 0; x < he.size; ++x) {
        std::size_t local = 0;
        for (std::size_t k = 0; k < pos.size(); ++k)
          local += static_cast<std::size_t>(host.level(*target, x, pos[k])) * se.stride[k];
        p.host_to_source[x] = static_cast<std::uint32_t>(local);
      }
      parts_.push_back(std::move(p));
      host_offsets_.push_back(he.offset);
    }
  }

  /// True iff every element of `source` lies inside some element of `host`.
  static bool fits(const GaiStructure& source, const GaiStructure& host) {
    for (const auto& se : source.elements()) {
      bool ok = false;
      for (const auto& he : host.elements())
        if (detail::includes(he, se)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  }

  void accumulate(std::span<const double> source_values, double coef,
                  std::span<double> host_values) const {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const auto& p = parts_[i];
      double* dst = host_values.data() + host_offsets_[i];
      const double* src = source_values.data() + p.source_offset;
      for (std::size_t x = 0; x < p.host_to_source.size(); ++x)
        dst[x] += coef * src[p.host_to_source[x]];
    }
  }

 private:
  struct Part {
    std::size_t host_element;
    std::size_t source_offset;
    std::vector<std::uint32_t> host_to_source;
  };
  std::vector<Part> parts_;
  std::vector<std::size_t> host_offsets_;
};

/// Maximizer of f among configurations whose every projection is permitted.
inline std::optional<Assignment> max_assignment(const GaiFunction& f,
                                                const ElementMask* mask = nullptr) {
  Eliminator elim(f.layout());
  Constraint c;
  if (mask) c.allowed = mask->flags();
  return elim.argmax(f.values(), c);
}

/// Exact (min, max) of f over Theta.
inline std::pair<double, double> min_max_range(const GaiFunction& f) {
  Eliminator elim(f.layout());
  const double hi = elim.max_value(f.values());
  std::vector<double> neg(f.values().begin(), f.values().end());
  for (double& v : neg) v = -v;
  const double lo = -elim.max_value(neg);
  return {lo, hi};
}

/// Counts next_best_outside invocations.
struct WorkCounter {
  std::size_t next_best_calls = 0;
};

namespace detail {

/// Best configuration (restricted to the given trees) having at least one
/// sub-configuration outside `excluded`: the best over g constrained
/// problems, where problem i forces element i outside and every earlier
/// element inside.  Elements are taken in canonical (index) order.
inline std::optional<Assignment> next_best_outside_impl(
    Eliminator& elim, std::span<const double> factors,
    std::span<const char> excluded, const std::vector<std::size_t>& comps,
    WorkCounter* counter) {
  if (counter) ++counter->next_best_calls;
  const GaiLayout& layout = elim.layout();
  const auto& structure = layout.structure();
  std::vector<std::size_t> elements;
  for (std::size_t j : comps)
    elements.insert(elements.end(), structure.components()[j].begin(),
                    structure.components()[j].end());
  std::sort(elements.begin(), elements.end());

  std::vector<ElementMode> mode(layout.element_count(), ElementMode::kAny);
  std::vector<double> values(elements.size(), kNegInf);
  double best = kNegInf;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t k = 0; k < elements.size(); ++k)
      mode[elements[k]] = k < i    ? ElementMode::kInsideOnly
                          : k == i ? ElementMode::kOutsideOnly
                                   : ElementMode::kAny;
    Constraint c{{}, excluded, mode};
    double total = 0.0;
    for (std::size_t j : comps) {
      const double v = elim.component_max(factors, j, c);
      if (v == kNegInf) {
        total = kNegInf;
        break;
      }
      total += v;
    }
    values[i] = total;
    best = std::max(best, total);
  }
  if (best == kNegInf) return std::nullopt;

  std::optional<Assignment> chosen;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (values[i] < best - kTolerance) continue;
    for (std::size_t k = 0; k < elements.size(); ++k)
      mode[elements[k]] = k < i    ? ElementMode::kInsideOnly
                          : k == i ? ElementMode::kOutsideOnly
                                   : ElementMode::kAny;
    Constraint c{{}, excluded, mode};
    Assignment a;
    a.config.levels.assign(layout.schema().size(), 0);
    for (std::size_t j : comps) {
      auto v = elim.component_argmax(factors, j, c, a.config);
      a.value += *v;
    }
    if (!chosen || a.config < chosen->config) chosen = std::move(a);
  }
  return chosen;
}

inline std::vector<std::size_t> all_components(const GaiLayout& layout) {
  std::vector<std::size_t> v(layout.structure().components().size());
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace detail

/// The best configuration in Theta \ M, i.e. having at least one
/// sub-configuration outside `excluded`; nullopt when none exists.
inline std::optional<Assignment> next_best_outside(const GaiFunction& f,
                                                   const PreferredSet& excluded,
                                                   WorkCounter* counter = nullptr) {
  Eliminator elim(f.layout());
  return detail::next_best_outside_impl(elim, f.values(), excluded.member,
                                        detail::all_components(f.layout()), counter);
}

/// Same, restricted to tree `comp`; only that tree's attributes are set in
/// the returned configuration.
inline std::optional<Assignment> next_best_outside_in_tree(
    Eliminator& elim, std::span<const double> profit, const PreferredSet& excluded,
    std::size_t comp, WorkCounter* counter = nullptr) {
  return detail::next_best_outside_impl(elim, profit, excluded.member, {comp},
                                        counter);
}

/// Buyer-preferred set: per tree G_j, every sub-configuration of a tree
/// configuration whose profit is within g_j * eps / g of the tree maximum.
/// Grown from `previous` by repeated next-best queries.  Tree maxima cached
/// in `previous` are reused; missing ones are computed.
inline PreferredSet buyer_preferred_set(Eliminator& elim,
                                        std::span<const double> profit, double eps,
                                        const PreferredSet& previous,
                                        WorkCounter* counter = nullptr) {
  const GaiLayout& layout = elim.layout();
  const auto& structure = layout.structure();
  const double g = static_cast<double>(layout.element_count());
  PreferredSet ps = previous.member.empty() ? PreferredSet(layout) : previous;
  for (std::size_t j = 0; j < structure.components().size(); ++j) {
    if (std::isnan(ps.tree_max[j])) ps.tree_max[j] = elim.component_max(profit, j);
    const double threshold =
        ps.tree_max[j] - static_cast<double>(structure.tree_size(j)) * eps / g;
    for (;;) {
      auto next = next_best_outside_in_tree(elim, profit, ps, j, counter);
      if (!next || next->value < threshold - kTolerance) break;
      for (std::size_t r : structure.components()[j])
        ps.member[layout.id(r, next->config)] = 1;
    }
  }
  return ps;
}

inline PreferredSet buyer_preferred_set(const GaiFunction& profit, double eps,
                                        const PreferredSet& previous = {},
                                        WorkCounter* counter = nullptr) {
  Eliminator elim(profit.layout());
  return buyer_preferred_set(elim, profit.values(), eps, previous, counter);
}

/// True iff every projection of c is in ps.
inline bool in_preferred(const GaiLayout& layout, const Configuration& c,
                         const PreferredSet& ps) {
  if (ps.member.empty()) return false;
  for (std::size_t r = 0; r < layout.element_count(); ++r)
    if (!ps.contains(layout.id(r, c))) return false;
  return true;
}

/// True iff some consistent cover uses only sub-configurations in both ps and
/// the bid set (one flag per layout entry).
inline bool exists_cover_in(Eliminator& elim, const PreferredSet& ps,
                            std::span<const char> bid) {
  if (ps.member.empty()) return false;
  const GaiLayout& layout = elim.layout();
  std::vector<char> both(layout.total_size());
  for (std::size_t i = 0; i < both.size(); ++i) both[i] = ps.member[i] && bid[i];
  std::vector<double> zero(layout.total_size(), 0.0);
  Constraint c;
  c.allowed = both;
  return elim.max_value(zero, c) != kNegInf;
}

inline bool exists_cover_in(const GaiLayout& layout, const PreferredSet& ps,
                            const std::vector<SubConfigId>& bid_subs) {
  Eliminator elim(layout);
  std::vector<char> bid(layout.total_size(), 0);
  for (SubConfigId id : bid_subs) bid.at(id) = 1;
  return exists_cover_in(elim, ps, bid);
}

}  // namespace gaiauction

#endif  // GAIAUCTION_GAI_OPTIM_HPP
