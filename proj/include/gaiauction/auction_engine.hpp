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

#ifndef GAIAUCTION_AUCTION_ENGINE_HPP
#define GAIAUCTION_AUCTION_ENGINE_HPP

/// \file auction_engine.hpp
///
/// The two-phase GAI procurement auction.
///
/// Phase A: each round, active sellers submit sub-bids, the buyer-preferred
/// set is recomputed, and every bid sub-configuration outside it loses
/// `delta`.  The phase ends when every active seller has a full bid whose
/// sub-configurations all lie in the preferred set.
///
/// Phase B: sub-configuration prices freeze; each seller is held to the
/// buyer-best configuration eta_i among its final full bids, and a common
/// discount grows by eps per round until at most one seller remains.

#include <gaiauction/bidders.hpp>
#include <gaiauction/core_model.hpp>
#include <gaiauction/decomposition.hpp>
#include <gaiauction/gai_optim.hpp>
#include <gaiauction/price_state.hpp>

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gaiauction {

/// A runtime check of one of the auction's guarantees failed.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialPrices {
  /// One constant price per element; when empty, each element is priced at
  /// its maximal buyer constituent plus headroom / g.
  std::vector<double> per_element;
  double headroom = 0.0;

  static InitialPrices constant(std::vector<double> prices) { return {std::move(prices), 0.0}; }
  static InitialPrices with_headroom(double h) { return {{}, h}; }
};

struct AuctionConfig {
  double eps = 1.0;
  /// Phase A decrement; 0 selects eps / g.
  double delta = 0.0;
  InitialPrices initial = InitialPrices::with_headroom(1.0);
  std::size_t round_cap = 1000000;
  bool check_invariants = true;
  /// Keep per-round bid and preferred-set lists in the trace.
  bool record_rounds = true;
};

enum class Phase { kA, kB };

struct RoundRecord {
  std::size_t round = 0;
  Phase phase = Phase::kA;
  double discount = 0.0;
  /// Per seller: sub-bids (Phase A) or the projections of eta (Phase B,
  /// when staying).  Empty for inactive or dropping sellers.
  std::vector<std::vector<SubConfigId>> bids;
  /// Per seller: 1 active after this round, 0 dropped this round, -1 was
  /// already inactive.
  std::vector<int> status;
  std::vector<SubConfigId> preferred;    // Phase A only
  std::vector<SubConfigId> decremented;  // Phase A only
  bool switched = false;
};

struct Allocation {
  std::size_t winner = 0;
  Configuration config;
  double payment = 0.0;
};

struct AuctionTrace {
  std::vector<RoundRecord> rounds;
  std::size_t phase_a_rounds = 0;  // T; 0 when Phase A never switched
  std::size_t final_round = 0;
  std::vector<std::optional<Configuration>> eta;
  std::optional<Allocation> allocation;
  /// 1: everyone dropped in Phase A.  2: the last sellers dropped together.
  /// 3: final price above the buyer's value, offer at value.  4: regular.
  int termination_case = 1;
  /// Under case 2, whether the price was above the buyer's value.
  bool offered_at_value = false;
  bool offer_accepted = false;
  double final_discount = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  double initial_price_sum = 0.0;
  double buyer_max_profit = 0.0;  // max buyer profit at the initial prices
  std::size_t next_best_calls = 0;
  /// Per sub-configuration: bid by some seller while in the preferred set.
  std::vector<char> revealed;
  PriceState final_prices;
};

// ---------------------------------------------------------------------------

inline PriceState init_prices(const GaiFunction& buyer, const InitialPrices& policy) {
  const GaiLayout& layout = buyer.layout();
  const std::size_t g = layout.element_count();
  PriceState ps{buyer.layout_ptr(), std::vector<double>(layout.total_size()), 0.0, 1};
  for (std::size_t r = 0; r < g; ++r) {
    auto t = buyer.table(r);
    const double top = *std::max_element(t.begin(), t.end());
    double p;
    if (!policy.per_element.empty()) {
      if (policy.per_element.size() != g)
        throw std::invalid_argument("initial prices: one price per element expected");
      p = policy.per_element[r];
    } else {
      if (!(policy.headroom > 0.0))
        throw std::invalid_argument("initial prices: headroom must be positive");
      p = top + policy.headroom / static_cast<double>(g);
    }
    if (!(p > top))
      throw std::invalid_argument("initial price of element " + std::to_string(r) +
                                  " does not exceed the buyer's valuation");
    const auto& el = layout.element(r);
    std::fill(ps.prices.begin() + static_cast<std::ptrdiff_t>(el.offset),
              ps.prices.begin() + static_cast<std::ptrdiff_t>(el.offset + el.size), p);
  }
  return ps;
}

/// Buyer profit per sub-configuration: f_b - p (the discount is a
/// configuration-level constant and does not enter).
inline std::vector<double> buyer_profit_tables(const GaiFunction& buyer,
                                               const PriceState& ps) {
  std::vector<double> out(buyer.values().begin(), buyer.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= ps.prices[i];
  return out;
}

struct PhaseARound {
  PriceState next;
  PreferredSet preferred;
  bool switched = false;
  std::vector<SubConfigId> decremented;
};

/// One Phase A round given this round's bids (one sub-bid list per seller,
/// empty for sellers not bidding).  The switch test uses this round's bids
/// and preferred set, before any price change; when it holds, prices are
/// left as they are.
inline PhaseARound phase_a_round(const PriceState& state, const GaiFunction& buyer,
                                 std::span<const std::vector<SubConfigId>> bids,
                                 double eps, double delta, Eliminator& elim,
                                 const PreferredSet& previous = {},
                                 WorkCounter* counter = nullptr) {
  const GaiLayout& layout = buyer.layout();
  PhaseARound out;
  auto profit = buyer_profit_tables(buyer, state);
  out.preferred = buyer_preferred_set(elim, profit, eps, previous, counter);

  out.switched = true;
  std::vector<char> flags(layout.total_size(), 0);
  for (const auto& b : bids) {
    if (b.empty()) continue;
    std::fill(flags.begin(), flags.end(), 0);
    for (SubConfigId id : b) flags.at(id) = 1;
    if (!exists_cover_in(elim, out.preferred, flags)) {
      out.switched = false;
      break;
    }
  }

  out.next = state;
  if (out.switched) return out;
  std::vector<char> hit(layout.total_size(), 0);
  for (const auto& b : bids)
    for (SubConfigId id : b)
      if (!out.preferred.contains(id)) hit[id] = 1;
  for (SubConfigId id = 0; id < hit.size(); ++id) {
    if (!hit[id]) continue;
    out.next.prices[id] -= delta;
    out.decremented.push_back(id);
  }
  out.next.round = state.round + 1;
  return out;
}

/// Buyer-best consistent cover of each seller's sub-bids at the given prices;
/// nullopt for sellers without bids or without a consistent cover.
inline std::vector<std::optional<Configuration>> select_eta(
    std::span<const std::vector<SubConfigId>> seller_bids, const GaiFunction& buyer,
    const PriceState& ps) {
  const GaiLayout& layout = buyer.layout();
  Eliminator elim(layout);
  auto profit = buyer_profit_tables(buyer, ps);
  std::vector<std::optional<Configuration>> out;
  std::vector<char> flags(layout.total_size());
  for (const auto& b : seller_bids) {
    if (b.empty()) {
      out.emplace_back();
      continue;
    }
    std::fill(flags.begin(), flags.end(), 0);
    for (SubConfigId id : b) flags.at(id) = 1;
    Constraint c;
    c.allowed = flags;
    auto a = elim.argmax(profit, c);
    if (a) out.emplace_back(a->config);
    else out.emplace_back();
  }
  return out;
}

/// Raises the discount by eps and retires the sellers whose decision is to
/// drop.
inline PriceState phase_b_round(const PriceState& state, double eps,
                                std::span<const char> stay, std::vector<char>& active) {
  PriceState next = state;
  next.round = state.round + 1;
  bool any = false;
  for (char a : active) any = any || a;
  if (!any) return next;
  next.discount = state.discount + eps;
  for (std::size_t i = 0; i < active.size(); ++i)
    if (active[i] && !stay[i]) active[i] = 0;
  return next;
}

// ---------------------------------------------------------------------------

namespace detail {

inline void check(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation(what);
}

}  // namespace detail

/// Runs the auction to completion.  With cfg.check_invariants, the
/// following are asserted and reported as InvariantViolation:
///  - the maximal buyer profit, per tree and overall, does not move during
///    Phase A (when delta * g <= eps);
///  - each Phase A round that does not switch lowers at least one price;
///  - the number of Phase A rounds is at most sum of initial prices * g / eps;
///  - next-best queries number at most |I| + h * T.
inline AuctionTrace run_auction(const GaiFunction& buyer,
                                std::span<SellerAgent* const> sellers,
                                const AuctionConfig& cfg) {
  const GaiLayout& layout = buyer.layout();
  const std::size_t m = sellers.size();
  const std::size_t g = layout.element_count();
  const std::size_t h = layout.structure().components().size();
  const double gd = static_cast<double>(g);
  if (!(cfg.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double delta = cfg.delta > 0.0 ? cfg.delta : cfg.eps / gd;
  if (delta > cfg.eps + kTolerance) throw std::invalid_argument("delta must not exceed eps");
  if (m == 0) throw std::invalid_argument("auction needs at least one seller");

  AuctionTrace trace;
  trace.delta = delta;
  trace.eps = cfg.eps;
  trace.revealed.assign(layout.total_size(), 0);
  trace.eta.assign(m, std::nullopt);

  PriceState state = init_prices(buyer, cfg.initial);
  for (double p : state.prices) trace.initial_price_sum += p;
  Eliminator elim(layout);
  {
    auto profit = buyer_profit_tables(buyer, state);
    trace.buyer_max_profit = elim.max_value(profit);
    if (cfg.check_invariants)
      detail::check(trace.buyer_max_profit < 0.0,
                    "initial prices leave the buyer a non-negative profit");
  }
  // The preferred set's tree maxima stay fixed during Phase A only when the
  // decrement is at most eps / g; otherwise they are refreshed every round.
  const bool stable_max = delta * gd <= cfg.eps + kTolerance;
  std::vector<double> initial_tree_max;

  WorkCounter counter;
  std::vector<char> active(m, 1);
  std::vector<std::vector<SubConfigId>> bids(m);
  PreferredSet ps(layout);

  // Phase A
  for (;;) {
    if (state.round > cfg.round_cap)
      throw InvariantViolation("round cap exceeded in Phase A");
    RoundRecord rec;
    rec.round = state.round;
    rec.phase = Phase::kA;
    rec.status.assign(m, -1);
    std::size_t n_active = 0;
    for (std::size_t i = 0; i < m; ++i) {
      bids[i].clear();
      if (!active[i]) continue;
      bids[i] = sellers[i]->bid(state);
      if (bids[i].empty()) {
        active[i] = 0;
        rec.status[i] = 0;
      } else {
        rec.status[i] = 1;
        ++n_active;
      }
    }
    if (n_active == 0) {
      if (cfg.record_rounds) trace.rounds.push_back(std::move(rec));
      trace.final_round = state.round;
      trace.termination_case = 1;
      trace.next_best_calls = counter.next_best_calls;
      trace.final_prices = state;
      return trace;
    }

    if (!stable_max) std::fill(ps.tree_max.begin(), ps.tree_max.end(), std::nan(""));
    PhaseARound step =
        phase_a_round(state, buyer, bids, cfg.eps, delta, elim, ps, &counter);
    ps = step.preferred;

    if (cfg.check_invariants) {
      auto profit = buyer_profit_tables(buyer, state);
      std::vector<double> fresh(h);
      for (std::size_t j = 0; j < h; ++j) fresh[j] = elim.component_max(profit, j);
      if (initial_tree_max.empty()) initial_tree_max = fresh;
      if (stable_max) {
        double total0 = 0.0, total = 0.0;
        for (std::size_t j = 0; j < h; ++j) {
          const double tol = kTolerance * std::max(1.0, std::abs(initial_tree_max[j]));
          detail::check(std::abs(fresh[j] - initial_tree_max[j]) <= tol &&
                            std::abs(ps.tree_max[j] - fresh[j]) <= tol,
                        "maximal buyer profit moved in round " +
                            std::to_string(state.round));
          total0 += initial_tree_max[j];
          total += fresh[j];
        }
        detail::check(std::abs(total - total0) <= kTolerance * std::max(1.0, std::abs(total0)) * gd,
                      "maximal buyer profit moved in round " + std::to_string(state.round));
      }
    }

    for (std::size_t i = 0; i < m; ++i)
      for (SubConfigId id : bids[i])
        if (ps.contains(id)) trace.revealed[id] = 1;

    if (cfg.record_rounds) {
      rec.bids = bids;
      rec.preferred = ps.ids();
      rec.decremented = step.decremented;
      rec.switched = step.switched;
      trace.rounds.push_back(std::move(rec));
    }

    if (step.switched) break;
    if (cfg.check_invariants)
      detail::check(!step.decremented.empty(),
                    "Phase A round " + std::to_string(state.round) +
                        " neither switched nor lowered a price");
    state = std::move(step.next);
  }

  trace.phase_a_rounds = state.round;
  if (cfg.check_invariants) {
    detail::check(static_cast<double>(trace.phase_a_rounds) <=
                      trace.initial_price_sum * gd / cfg.eps + kTolerance,
                  "Phase A took more rounds than the price-sum bound");
    detail::check(counter.next_best_calls <= layout.total_size() + h * trace.phase_a_rounds,
                  "too many next-best queries");
  }

  auto etas = select_eta(bids, buyer, state);
  for (std::size_t i = 0; i < m; ++i)
    if (active[i]) {
      if (!etas[i]) throw InvariantViolation("active seller without a consistent full bid");
      trace.eta[i] = etas[i];
    }

  // Phase B
  std::vector<std::size_t> last_droppers;
  auto count_active = [&] {
    std::size_t n = 0;
    for (char a : active) n += a ? 1 : 0;
    return n;
  };
  while (count_active() > 1) {
    if (state.round >= cfg.round_cap)
      throw InvariantViolation("round cap exceeded in Phase B");
    PriceState probe = state;
    probe.discount += cfg.eps;
    std::vector<char> stay(m, 0);
    RoundRecord rec;
    rec.round = state.round + 1;
    rec.phase = Phase::kB;
    rec.discount = probe.discount;
    rec.status.assign(m, -1);
    rec.bids.assign(m, {});
    last_droppers.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) continue;
      stay[i] = sellers[i]->stay(*trace.eta[i], probe) ? 1 : 0;
      rec.status[i] = stay[i];
      if (stay[i]) rec.bids[i] = projection_ids(layout, *trace.eta[i]);
      else last_droppers.push_back(i);
    }
    state = phase_b_round(state, cfg.eps, stay, active);
    if (cfg.record_rounds) trace.rounds.push_back(std::move(rec));
  }
  trace.final_round = state.round;
  trace.next_best_calls = counter.next_best_calls;
  trace.final_prices = state;

  // Termination
  std::optional<std::size_t> winner;
  double discount = state.discount;
  for (std::size_t i = 0; i < m; ++i)
    if (active[i]) winner = i;
  trace.termination_case = 4;
  if (!winner) {
    // Everyone left in the same round: the best of them for the buyer at the
    // frozen prices, paying under the last discount all of them accepted.
    trace.termination_case = 2;
    double best = kNegInf;
    for (std::size_t i : last_droppers) {
      const double v =
          buyer.evaluate(*trace.eta[i]) - (price_of(state, *trace.eta[i]) + state.discount);
      if (v > best + kTolerance) {
        best = v;
        winner = i;
      }
    }
    discount = state.discount - cfg.eps;
  }
  trace.final_discount = discount;
  const Configuration& eta = *trace.eta[*winner];
  PriceState at_end = state;
  at_end.discount = discount;
  const double price = price_of(at_end, eta);
  const double value = buyer.evaluate(eta);
  if (price > value + kTolerance) {
    if (trace.termination_case != 2) trace.termination_case = 3;
    trace.offered_at_value = true;
    trace.offer_accepted = sellers[*winner]->accept(eta, value);
    if (trace.offer_accepted) trace.allocation = Allocation{*winner, eta, value};
  } else {
    trace.allocation = Allocation{*winner, eta, price};
  }
  return trace;
}

inline AuctionTrace run_auction(const GaiFunction& buyer,
                                std::vector<StraightforwardBidder>& sellers,
                                const AuctionConfig& cfg) {
  std::vector<SellerAgent*> ptrs;
  for (auto& s : sellers) ptrs.push_back(&s);
  return run_auction(buyer, std::span<SellerAgent* const>(ptrs), cfg);
}

// ---------------------------------------------------------------------------
// Surplus optimization and VCG

struct MapSolution {
  std::size_t seller = 0;
  Configuration config;
  double surplus = kNegInf;
};

/// max_theta u_b(theta) - c(theta), optimized on the merged structure.
inline Assignment bilateral_optimum(const GaiFunction& buyer, const GaiFunction& cost) {
  if (!(buyer.schema() == cost.schema()))
    throw std::invalid_argument("buyer and seller use different schemas");
  LayoutPtr host;
  if (FactorMap::fits(cost.structure(), buyer.structure())) {
    host = buyer.layout_ptr();
  } else {
    host = make_layout(buyer.schema(), merge_structures(buyer.structure(), cost.structure()));
  }
  std::vector<double> factors(host->total_size(), 0.0);
  FactorMap(buyer.layout(), *host).accumulate(buyer.values(), 1.0, factors);
  FactorMap(cost.layout(), *host).accumulate(cost.values(), -1.0, factors);
  Eliminator elim(*host);
  return *elim.argmax(factors);
}

/// Best (seller, configuration) pair by surplus; ties go to the lower seller
/// index.
inline MapSolution map_optimum(const GaiFunction& buyer, std::span<const GaiFunction> costs) {
  MapSolution best;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    Assignment a = bilateral_optimum(buyer, costs[i]);
    if (a.value > best.surplus + kTolerance) best = {i, a.config, a.value};
  }
  return best;
}

struct VcgResult {
  std::size_t winner = 0;
  Configuration config;
  double surplus = 0.0;
  double rival_surplus = 0.0;  // max(0, best surplus without the winner)
  double payment = 0.0;
};

/// Sell-side VCG: the winner is paid u_b(theta*) minus the best surplus
/// attainable without it (floored at zero).
inline VcgResult vcg_payment(const GaiFunction& buyer, std::span<const GaiFunction> costs) {
  if (costs.empty()) throw std::invalid_argument("vcg_payment needs a seller");
  std::vector<Assignment> best;
  for (const auto& c : costs) best.push_back(bilateral_optimum(buyer, c));
  VcgResult r;
  double top = kNegInf;
  for (std::size_t i = 0; i < best.size(); ++i)
    if (best[i].value > top + kTolerance) {
      top = best[i].value;
      r.winner = i;
    }
  r.config = best[r.winner].config;
  r.surplus = top;
  double rival = 0.0;
  for (std::size_t i = 0; i < best.size(); ++i)
    if (i != r.winner) rival = std::max(rival, best[i].value);
  r.rival_surplus = rival;
  r.payment = buyer.evaluate(r.config) - rival;
  return r;
}

/// VCG payment of a given winner for a given configuration: u_b(config)
/// minus the best surplus attainable without that winner (floored at zero).
/// This is the reference the auction's payment tracks when its allocation is
/// near-efficient rather than exactly efficient.
inline VcgResult vcg_payment_for(const GaiFunction& buyer, std::span<const GaiFunction> costs,
                                 std::size_t winner, const Configuration& config) {
  if (winner >= costs.size()) throw std::invalid_argument("vcg_payment_for: no such seller");
  VcgResult r;
  r.winner = winner;
  r.config = config;
  const double value = buyer.evaluate(config);
  r.surplus = value - costs[winner].evaluate(config);
  double rival = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i)
    if (i != winner) rival = std::max(rival, bilateral_optimum(buyer, costs[i]).value);
  r.rival_surplus = rival;
  r.payment = value - rival;
  return r;
}

}  // namespace gaiauction

#endif  // GAIAUCTION_AUCTION_ENGINE_HPP
