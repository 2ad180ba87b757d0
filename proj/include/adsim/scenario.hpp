#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "adsim/market.hpp"

namespace adsim {

// One row of a page-transition kernel: a distribution over next pages plus
// an end-of-session mass. Sampling uses the inverse CDF with pages in
// configuration order followed by "end".
struct KernelRow {
  Eigen::VectorXd page_probs;  // size = number of pages
  double end_prob = 0.0;

  // Returns the next page index, or -1 for end-of-session.
  int sample(double u) const;

  double total() const { return page_probs.sum() + end_prob; }
};

struct ReplenishmentParams {
  double prob = 0.0;    // per-impression chance of a replenishment event
  Money amount = 0.0;   // amount added when the event fires
};

// Full generative model for one marketplace: users, advertisers, pages,
// transition kernels, valuations, budgets, and the scale bounds (L, S, B).
struct ScenarioConfig {
  int num_users = 0;        // d
  int num_advertisers = 0;  // m
  std::vector<std::string> pages;
  Eigen::VectorXd session_start;  // distribution over pages

  // Kernels keyed on (page, ad shown?). When `kernel_sold_by_winner[page]`
  // is nonempty it overrides `kernel_sold[page]` with one row per winning
  // advertiser.
  std::vector<KernelRow> kernel_unsold;
  std::vector<KernelRow> kernel_sold;
  std::vector<std::vector<KernelRow>> kernel_sold_by_winner;

  int session_cap = 0;      // L: hard per-session impression bound
  int concurrency_cap = 0;  // S: max concurrent sessions
  Money bid_cap = 0.0;      // B: max payment on one impression

  double arrival_prob = 0.0;  // per idle user per tick
  int ticks_per_day = 0;

  Eigen::MatrixXd valuations;  // pages x advertisers
  BudgetProfile initial_budgets;
  std::vector<ReplenishmentParams> replenishment;  // per advertiser

  int page_index(const std::string& name) const;  // throws ConfigError

  // Kernel row for (page, sold?, winner). `winner` < 0 means unsold.
  const KernelRow& kernel(int page, bool sold, int winner) const;

  // Throws ConfigError listing every violation at once: row sums off by
  // more than 1e-12, negative entries, empty page set, L/S/B not positive,
  // valuations above the bid cap, size mismatches.
  void validate() const;
};

}  // namespace adsim
