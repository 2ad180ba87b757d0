#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "adsim/chain.hpp"

namespace adsim {

// Randomized user split for the budget-split design. group[u] is 0 for A,
// 1 for B.
struct Assignment {
  std::vector<int> group;
  double q = 0.5;
  std::uint64_t seed = 0;

  std::int64_t count_a() const;
};

// Independent Bernoulli(q) assignment per user, deterministic in seed.
// d = 0 is an error; q in {0, 1} is allowed for diagnostics only.
Assignment assign_users(int d, double q, std::uint64_t seed);

// Proportional budget copies: (q * budget, (1-q) * budget) per advertiser.
std::pair<BudgetProfile, BudgetProfile> split_budgets(
    const BudgetProfile& budgets, double q);

// Outputs of one budget-split experiment over k days.
struct Measurements {
  std::int64_t v_count = 0;  // V_k: impressions in the A arm
  std::int64_t w_count = 0;  // W_k
  Money rbar_a = 0.0;        // average revenue per A impression
  Money rbar_b = 0.0;
  bool rbar_a_defined = false;  // false when the arm saw zero impressions
  bool rbar_b_defined = false;
  Money sum_a = 0.0;  // S_{V_k}
  Money sum_b = 0.0;
  int days = 0;
  double q = 0.5;
  std::vector<Money> payments_a;  // kept when requested, for batch means
  std::vector<Money> payments_b;
};

// One split world with a shared clock: A users' impressions evolve under
// reserve v with the A budget copies, B users' under w with the B copies.
// Every replenishment event is split q / (1-q) across the copies.
Measurements run_experiment(const ScenarioConfig& cfg, Money v, Money w,
                            double q, int k, std::uint64_t seed,
                            std::uint64_t replication = 0,
                            bool keep_payments = false);

// (V_k / q) * rbar_A - (W_k / (1-q)) * rbar_B. Throws std::invalid_argument
// when either arm has zero impressions.
Money estimate_delta(const Measurements& meas);

}  // namespace adsim
