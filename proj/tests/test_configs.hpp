#pragma once

#include "adsim/scenario.hpp"

namespace adsim::testing {

inline KernelRow make_row(std::initializer_list<double> page_probs,
                          double end_prob) {
  KernelRow row;
  row.page_probs = Eigen::VectorXd(page_probs.size());
  Eigen::Index i = 0;
  for (double p : page_probs) row.page_probs[i++] = p;
  row.end_prob = end_prob;
  return row;
}

// Two pages, two advertisers; session length coupled to whether an ad was
// shown. Tests tweak individual fields before use.
inline ScenarioConfig two_page_config() {
  ScenarioConfig cfg;
  cfg.num_users = 4;
  cfg.num_advertisers = 2;
  cfg.pages = {"pg0", "pg1"};
  cfg.session_start = Eigen::Vector2d(1.0, 0.0);
  cfg.kernel_unsold = {make_row({0.4, 0.4}, 0.2), make_row({0.4, 0.4}, 0.2)};
  cfg.kernel_sold = {make_row({0.3, 0.3}, 0.4), make_row({0.3, 0.3}, 0.4)};
  cfg.kernel_sold_by_winner = {{}, {}};
  cfg.session_cap = 6;
  cfg.concurrency_cap = 3;
  cfg.bid_cap = 3.0;
  cfg.arrival_prob = 0.2;
  cfg.ticks_per_day = 10;
  cfg.valuations = Eigen::MatrixXd(2, 2);
  cfg.valuations << 2.0, 1.0,
                    1.5, 2.5;
  cfg.initial_budgets = Eigen::Vector2d(50.0, 50.0);
  cfg.replenishment = {{0.5, 0.5}, {0.5, 0.5}};
  return cfg;
}

// two_page_config with budgets that never bind: the payment process is then
// stationary up to session dynamics, which the long-run diagnostics assume.
inline ScenarioConfig two_page_rich_config() {
  ScenarioConfig cfg = two_page_config();
  cfg.initial_budgets = Eigen::Vector2d(1e6, 1e6);
  cfg.replenishment = {{1.0, 1.0}, {1.0, 1.0}};
  return cfg;
}

// One page, one advertiser, constant valuation far above the reserve: every
// impression pays exactly the reserve, so payment variance is exactly zero.
inline ScenarioConfig flat_config() {
  ScenarioConfig cfg;
  cfg.num_users = 10;
  cfg.num_advertisers = 1;
  cfg.pages = {"only"};
  cfg.session_start = Eigen::VectorXd::Ones(1);
  cfg.kernel_unsold = {make_row({0.75}, 0.25)};
  cfg.kernel_sold = {make_row({0.75}, 0.25)};
  cfg.kernel_sold_by_winner = {{}};
  cfg.session_cap = 6;
  cfg.concurrency_cap = 4;
  cfg.bid_cap = 2.0;
  cfg.arrival_prob = 0.15;
  cfg.ticks_per_day = 20;
  cfg.valuations = Eigen::MatrixXd::Constant(1, 1, 2.0);
  cfg.initial_budgets = Eigen::VectorXd::Constant(1, 1000.0);
  cfg.replenishment = {{1.0, 1.0}};
  return cfg;
}

}  // namespace adsim::testing
