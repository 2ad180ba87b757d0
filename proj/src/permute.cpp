#include "adsim/permute.hpp"

#include <algorithm>
#include <stdexcept>

namespace adsim {

WindowPermutation window_permute(std::span<const int> active_users, int T) {
  if (T < 1) throw std::invalid_argument("window length must be positive");
  const std::int64_t n = static_cast<std::int64_t>(active_users.size());
  WindowPermutation perm;
  perm.window = T;
  perm.forward.resize(n);
  perm.inverse.resize(n);

  std::vector<int> order;  // users by first appearance within the window
  for (std::int64_t begin = 0; begin < n; begin += T) {
    const std::int64_t end = std::min(begin + T, n);
    order.clear();
    for (std::int64_t i = begin; i < end; ++i) {
      if (std::find(order.begin(), order.end(), active_users[i]) ==
          order.end()) {
        order.push_back(active_users[i]);
      }
    }
    std::int64_t pos = begin;
    for (int user : order) {
      for (std::int64_t i = begin; i < end; ++i) {
        if (active_users[i] == user) {
          perm.forward[i] = pos;
          perm.inverse[pos] = i;
          ++pos;
        }
      }
    }
  }
  return perm;
}

std::vector<ImpressionRecord> apply_permutation(
    const Trajectory& traj, const WindowPermutation& perm) {
  if (traj.records.size() != perm.size()) {
    throw std::invalid_argument("permutation/trajectory length mismatch");
  }
  std::vector<ImpressionRecord> permuted;
  permuted.reserve(traj.records.size());
  for (std::int64_t pos = 0;
       pos < static_cast<std::int64_t>(traj.records.size()); ++pos) {
    permuted.push_back(traj.records[perm.inverse[pos]]);
  }
  return permuted;
}

ReplayResult replay_budgets(const std::vector<ImpressionRecord>& permuted,
                            const BudgetProfile& initial_budgets,
                            const ScenarioConfig& cfg) {
  ReplayResult out;
  out.budgets.reserve(permuted.size());
  out.payments.reserve(permuted.size());
  BudgetProfile budgets = initial_budgets;
  for (const auto& rec : permuted) {
    // Bids are re-formed against the replayed remaining budgets; each
    // record's replenishment draw travels with the impression.
    AuctionOutcome outcome =
        run_auction(rec.reserve, cfg.valuations.row(rec.page), budgets);
    budgets += rec.replenishment;
    if (outcome.winner) budgets[*outcome.winner] -= outcome.payment;
    out.budgets.push_back(budgets);
    out.payments.push_back(outcome.payment);
    out.total += outcome.payment;
  }
  return out;
}

PermutationGap permutation_gap(const Trajectory& original,
                               const BudgetProfile& original_terminal,
                               const ReplayResult& replayed) {
  if (original.records.size() != replayed.payments.size()) {
    throw std::invalid_argument("original/replayed length mismatch");
  }
  PermutationGap gap;
  gap.revenue_gap = std::abs(original.total - replayed.total);
  if (!replayed.budgets.empty()) {
    gap.terminal_budget_gap =
        (original_terminal - replayed.budgets.back()).cwiseAbs();
  } else {
    gap.terminal_budget_gap = Eigen::VectorXd::Zero(original_terminal.size());
  }
  return gap;
}

}  // namespace adsim
