#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adsim/chain.hpp"

namespace adsim {

// Window-local permutation that groups interleaved impressions by
// user-session. Stored as forward (original index -> permuted position) and
// inverse (permuted position -> original index) arrays, both 0-based.
struct WindowPermutation {
  int window = 1;
  std::vector<std::int64_t> forward;
  std::vector<std::int64_t> inverse;

  std::size_t size() const { return forward.size(); }
};

// Builds the permutation over non-overlapping windows of T positions. Within
// a window, entries are grouped by user; user blocks are ordered by the
// user's first appearance in the window and each user's entries keep their
// original order.
WindowPermutation window_permute(std::span<const int> active_users, int T);

// Reorders a trajectory's records by the permutation. Throws
// std::invalid_argument on length mismatch.
std::vector<ImpressionRecord> apply_permutation(const Trajectory& traj,
                                                const WindowPermutation& perm);

// Budget dynamics replayed on a permuted impression order: bids are re-formed
// against the replayed remaining budgets, auctions re-run with each record's
// page and reserve, and each record's replenishment draw travels with it.
struct ReplayResult {
  std::vector<BudgetProfile> budgets;  // after each replayed impression
  std::vector<Money> payments;
  Money total = 0.0;
};

ReplayResult replay_budgets(const std::vector<ImpressionRecord>& permuted,
                            const BudgetProfile& initial_budgets,
                            const ScenarioConfig& cfg);

// |S_N(original) - S_N(replayed)| and per-advertiser terminal budget
// differences; quantifies the permutation-trick approximation.
struct PermutationGap {
  Money revenue_gap = 0.0;
  Eigen::VectorXd terminal_budget_gap;
};

PermutationGap permutation_gap(const Trajectory& original,
                               const BudgetProfile& original_terminal,
                               const ReplayResult& replayed);

}  // namespace adsim
