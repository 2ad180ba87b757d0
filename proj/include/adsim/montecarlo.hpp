#pragma once

#include <cstdint>

#include "adsim/chain.hpp"
#include "adsim/experiment.hpp"
#include "adsim/stats.hpp"

namespace adsim {

// Monte Carlo estimate of the long-term treatment effect from independent
// full-population chains (no common random numbers): mean S_{K_k} under v
// minus mean S_{K_k} under w.
struct OracleDelta {
  Money delta = 0.0;
  Money std_error = 0.0;
  int replications = 0;
  Money mean_v = 0.0;
  Money mean_w = 0.0;
};

OracleDelta oracle_delta(const ScenarioConfig& cfg, Money v, Money w, int k,
                         int replications, std::uint64_t seed);

// Long-run per-impression revenue statistics from one long chain, after a
// burn-in: mean payment and batch-means asymptotic sigma.
struct LongRunStats {
  double mean = 0.0;
  double sigma = 0.0;  // sqrt of the batch-means asymptotic variance
  std::int64_t n = 0;
};

LongRunStats long_run_payment_stats(const ScenarioConfig& cfg,
                                    const ReservePolicy& policy, int days,
                                    int burn_days, std::uint64_t seed);

// |E S_K - (E_pi r)(E K)| relative to (E_pi r)(E K); absolute when the
// long-run mean is zero.
struct WaldReport {
  double discrepancy = 0.0;
  bool relative = true;
  double mean_sum = 0.0;
  double mean_count = 0.0;
  double long_run_mean = 0.0;
};

WaldReport wald_check(const ScenarioConfig& cfg, const ReservePolicy& policy,
                      int k, int replications, std::uint64_t seed,
                      int ref_days = 4000, int ref_burn_days = 100);

// Empirical quantiles of the standardized stopped sums
// (S_K/K - mu) / (sigma / sqrt(K)) across replications, against the normal
// targets (-1.96, 0, 1.96). mu and sigma come from an independent long run.
struct AnscombeReport {
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  bool degenerate = false;  // zero-variance payments
  int replications = 0;
  double mu = 0.0;
  double sigma = 0.0;
};

AnscombeReport anscombe_diagnostic(const ScenarioConfig& cfg,
                                   const ReservePolicy& policy, int k,
                                   int replications, std::uint64_t seed,
                                   int warmup_days = 0, int ref_days = 4000,
                                   int ref_burn_days = 100);

// R independent budget-split experiments checked against the oracle effect:
// fraction of runs with |delta_hat - Delta| <= epsilon, for both the
// verbatim and the corrected epsilon mode.
struct CoverageReport {
  double coverage_verbatim = 0.0;
  double coverage_corrected = 0.0;
  double binomial_se = 0.0;  // of the verbatim coverage
  Money oracle = 0.0;
  Money oracle_se = 0.0;
  Money mean_delta_hat = 0.0;
  Money mean_epsilon = 0.0;
  int replications = 0;
  int skipped = 0;  // runs with an arm too small for batch means
};

CoverageReport coverage_experiment(const ScenarioConfig& cfg, Money v, Money w,
                                   double q, int k, double alpha,
                                   int replications, std::uint64_t seed,
                                   int oracle_replications);

}  // namespace adsim
