#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>

#include "adsim/errors.hpp"

namespace adsim {

using Money = double;
using BidProfile = Eigen::VectorXd;     // one entry per advertiser
using BudgetProfile = Eigen::VectorXd;  // remaining budget per advertiser

// Reserve-price policy: either one constant price for every page, or a
// per-page table.
class ReservePolicy {
 public:
  static ReservePolicy constant(Money value);
  static ReservePolicy table(std::map<int, Money> by_page);

  // Reserve price for a page. Table policies throw ConfigError on a page
  // that has no entry; constant policies ignore the page.
  Money at(int page) const;

  bool is_constant() const { return constant_.has_value(); }

 private:
  ReservePolicy() = default;
  std::optional<Money> constant_;
  std::map<int, Money> table_;
};

struct AuctionOutcome {
  std::optional<int> winner;  // advertiser index, absent when unsold
  Money payment = 0.0;
  BidProfile bids;
  Money reserve = 0.0;

  bool sold() const { return winner.has_value(); }
};

// Truthful-capped reference bid policy: bid = min(valuation, remaining).
// `valuations` holds each advertiser's valuation for the current page.
BidProfile bid_profile(const Eigen::VectorXd& valuations,
                       const BudgetProfile& budgets);

// Second-price revenue with reserve: the second-highest value of the
// multiset bids ∪ {reserve} when max(bids) >= reserve, else 0.
Money auction_revenue(Money reserve, const BidProfile& bids);

// Full auction: truthful-capped bids, argmax winner (ties to the lowest
// advertiser index), payment = auction_revenue. An all-zero bid profile is
// unsold even with a zero reserve.
AuctionOutcome run_auction(Money reserve, const Eigen::VectorXd& valuations,
                           const BudgetProfile& budgets);

// Winner pays, everyone replenishes. Throws std::logic_error if the payment
// exceeds the winner's remaining budget: bids are capped at the budget, so
// that can only happen through a caller bug.
BudgetProfile update_budgets(const BudgetProfile& budgets,
                             const AuctionOutcome& outcome,
                             const Eigen::VectorXd& replenishment);

}  // namespace adsim
