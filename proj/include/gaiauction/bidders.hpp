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

#ifndef GAIAUCTION_BIDDERS_HPP
#define GAIAUCTION_BIDDERS_HPP

/// \file bidders.hpp
///
/// Seller agents.  The auction talks to sellers only through SellerAgent;
/// StraightforwardBidder is the myopic profit maximizer: each round it bids
/// the projections of one configuration maximizing price minus cost, and it
/// drops out when every configuration loses money.

#include <gaiauction/core_model.hpp>
#include <gaiauction/decomposition.hpp>
#include <gaiauction/gai_optim.hpp>
#include <gaiauction/price_state.hpp>

#include <optional>
#include <vector>

namespace gaiauction {

class SellerAgent {
 public:
  virtual ~SellerAgent() = default;

  /// Sub-bids (ids in the price layout) for the current round; empty means
  /// the seller drops out.
  virtual std::vector<SubConfigId> bid(const PriceState& ps) = 0;

  /// Discount round: stay with eta at the current price, or drop.
  virtual bool stay(const Configuration& eta, const PriceState& ps) = 0;

  /// Take-it-or-leave-it offer to supply eta at `offer`.
  virtual bool accept(const Configuration& eta, double offer) = 0;

  virtual double cost(const Configuration& c) const = 0;
};

struct BidderOptions {
  /// Bid on every profit-maximizing configuration instead of the
  /// lexicographically smallest one.  Requires a cost structure that fits
  /// inside the price structure.
  bool multi_configuration = false;
};

class StraightforwardBidder : public SellerAgent {
 public:
  StraightforwardBidder(LayoutPtr price_layout, GaiFunction cost,
                        BidderOptions options = {})
      : price_layout_(std::move(price_layout)),
        cost_(std::move(cost)),
        options_(options) {
    if (!(cost_.schema() == price_layout_->schema()))
      throw std::invalid_argument("seller cost and prices use different schemas");
    if (FactorMap::fits(cost_.structure(), price_layout_->structure())) {
      host_ = price_layout_;
    } else if (options_.multi_configuration) {
      throw std::invalid_argument(
          "multi-configuration bids need a cost structure inside the price structure");
    } else {
      host_ = make_layout(cost_.schema(),
                          merge_structures(price_layout_->structure(), cost_.structure()));
    }
    price_map_.emplace(*price_layout_, *host_);
    base_.assign(host_->total_size(), 0.0);
    FactorMap(cost_.layout(), *host_).accumulate(cost_.values(), -1.0, base_);
    factors_.resize(base_.size());
    elim_.emplace(*host_);
  }

  /// The layout on which the seller optimizes (the price layout when the
  /// cost structure fits inside it, otherwise the merged structure).
  const GaiLayout& host_layout() const { return *host_; }
  const GaiFunction& cost_function() const { return cost_; }
  std::size_t host_width() const { return host_->structure().max_element_size(); }

  /// Profit-maximizing configuration at the given prices (lexicographically
  /// smallest) and its profit.
  Assignment best_response(const PriceState& ps) {
    load(ps);
    auto a = elim_->argmax(factors_);
    a->value -= ps.discount;
    return *a;
  }

  std::vector<SubConfigId> bid(const PriceState& ps) override {
    Assignment best = best_response(ps);
    last_profit_ = best.value;
    if (best.value < -kTolerance) return {};
    if (!options_.multi_configuration) return projection_ids(*price_layout_, best.config);
    // Every sub-configuration lying on some optimal configuration.
    auto mm = elim_->max_marginals(factors_);
    std::vector<SubConfigId> out;
    const double top = best.value + ps.discount;
    for (SubConfigId id = 0; id < mm.size(); ++id)
      if (mm[id] >= top - kTolerance) out.push_back(id);
    return out;
  }

  bool stay(const Configuration& eta, const PriceState& ps) override {
    return price_of(ps, eta) - cost(eta) >= -kTolerance;
  }

  bool accept(const Configuration& eta, double offer) override {
    return offer - cost(eta) >= -kTolerance;
  }

  double cost(const Configuration& c) const override { return cost_.evaluate(c); }

  std::optional<double> last_profit() const { return last_profit_; }

 private:
  void load(const PriceState& ps) {
    std::copy(base_.begin(), base_.end(), factors_.begin());
    price_map_->accumulate(ps.prices, 1.0, factors_);
  }

  LayoutPtr price_layout_;
  GaiFunction cost_;
  BidderOptions options_;
  LayoutPtr host_;
  std::optional<FactorMap> price_map_;
  std::vector<double> base_;
  std::vector<double> factors_;
  std::optional<Eliminator> elim_;
  std::optional<double> last_profit_;
};

}  // namespace gaiauction

#endif  // GAIAUCTION_BIDDERS_HPP
