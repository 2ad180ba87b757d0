#include "adsim/market.hpp"

#include <stdexcept>
#include <utility>

namespace adsim {

ReservePolicy ReservePolicy::constant(Money value) {
  if (value < 0) throw ConfigError("reserve price must be nonnegative");
  ReservePolicy p;
  p.constant_ = value;
  return p;
}

ReservePolicy ReservePolicy::table(std::map<int, Money> by_page) {
  for (const auto& [page, value] : by_page) {
    if (value < 0) {
      throw ConfigError("reserve price for page " + std::to_string(page) +
                        " must be nonnegative");
    }
  }
  ReservePolicy p;
  p.table_ = std::move(by_page);
  return p;
}

Money ReservePolicy::at(int page) const {
  if (constant_) return *constant_;
  auto it = table_.find(page);
  if (it == table_.end()) {
    throw ConfigError("no reserve price configured for page " +
                      std::to_string(page));
  }
  return it->second;
}

BidProfile bid_profile(const Eigen::VectorXd& valuations,
                       const BudgetProfile& budgets) {
  if (valuations.size() != budgets.size()) {
    throw std::invalid_argument("valuations/budgets size mismatch");
  }
  return valuations.cwiseMin(budgets);
}

Money auction_revenue(Money reserve, const BidProfile& bids) {
  if (bids.size() == 0) throw std::invalid_argument("empty bid profile");
  // Top two bids in one pass; the second-highest of bids ∪ {reserve} is
  // max(second bid, reserve) whenever the auction clears.
  double top = bids[0];
  double second = -1.0;
  for (Eigen::Index i = 1; i < bids.size(); ++i) {
    const double b = bids[i];
    if (b > top) {
      second = top;
      top = b;
    } else if (b > second) {
      second = b;
    }
  }
  if (top < reserve) return 0.0;
  return std::max(second, reserve);
}

AuctionOutcome run_auction(Money reserve, const Eigen::VectorXd& valuations,
                           const BudgetProfile& budgets) {
  AuctionOutcome out;
  out.reserve = reserve;
  out.bids = bid_profile(valuations, budgets);
  Eigen::Index top = 0;
  for (Eigen::Index i = 1; i < out.bids.size(); ++i) {
    if (out.bids[i] > out.bids[top]) top = i;  // ties keep the lowest index
  }
  const double max_bid = out.bids[top];
  // An all-zero profile is unsold even under a zero reserve.
  if (max_bid >= reserve && max_bid > 0.0) {
    out.winner = static_cast<int>(top);
    out.payment = auction_revenue(reserve, out.bids);
  }
  return out;
}

BudgetProfile update_budgets(const BudgetProfile& budgets,
                             const AuctionOutcome& outcome,
                             const Eigen::VectorXd& replenishment) {
  if (replenishment.size() != budgets.size()) {
    throw std::invalid_argument("replenishment/budgets size mismatch");
  }
  if (replenishment.minCoeff() < 0) {
    throw std::invalid_argument("replenishment must be nonnegative");
  }
  BudgetProfile next = budgets;
  if (outcome.winner) {
    const int w = *outcome.winner;
    if (outcome.payment > budgets[w]) {
      throw std::logic_error("payment exceeds winner's remaining budget");
    }
    next[w] -= outcome.payment;
  }
  next += replenishment;
  return next;
}

}  // namespace adsim
