#include "adsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adsim {

namespace {

double sample_mean(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m += x;
  return xs.empty() ? 0.0 : m / static_cast<double>(xs.size());
}

double sample_se(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

// Order-statistic quantile with linear interpolation on sorted data.
double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - std::floor(h)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

OracleDelta oracle_delta(const ScenarioConfig& cfg, Money v, Money w, int k,
                         int replications, std::uint64_t seed) {
  if (replications < 2) throw std::invalid_argument("need >= 2 replications");
  const ReservePolicy pv = ReservePolicy::constant(v);
  const ReservePolicy pw = ReservePolicy::constant(w);
  std::vector<double> sums_v(replications), sums_w(replications);
  for (int r = 0; r < replications; ++r) {
    // Distinct replication indices keep the two expectations independent.
    sums_v[r] = run_chain(cfg, pv, k, seed, 2 * r).arms[0].sum;
    sums_w[r] = run_chain(cfg, pw, k, seed, 2 * r + 1).arms[0].sum;
  }
  OracleDelta out;
  out.replications = replications;
  out.mean_v = sample_mean(sums_v);
  out.mean_w = sample_mean(sums_w);
  out.delta = out.mean_v - out.mean_w;
  const double se_v = sample_se(sums_v, out.mean_v);
  const double se_w = sample_se(sums_w, out.mean_w);
  out.std_error = std::sqrt(se_v * se_v + se_w * se_w);
  return out;
}

LongRunStats long_run_payment_stats(const ScenarioConfig& cfg,
                                    const ReservePolicy& policy, int days,
                                    int burn_days, std::uint64_t seed) {
  SimOptions opt;
  opt.keep_payments = true;
  opt.warmup_days = burn_days;
  Simulator sim(cfg, {Simulator::Arm{policy, 1.0}},
                std::vector<int>(cfg.num_users, 0), seed,
                /*replication=*/0x4C4F4E47ull);
  SimResult result = sim.run(days, opt);
  const auto& payments = result.arms[0].payments;
  LongRunStats stats;
  stats.n = static_cast<std::int64_t>(payments.size());
  if (payments.empty()) return stats;
  stats.mean = result.arms[0].sum / static_cast<double>(payments.size());
  if (payments.size() >= 4) {
    stats.sigma = std::sqrt(batch_means_variance(payments).sigma_sq);
  }
  return stats;
}

WaldReport wald_check(const ScenarioConfig& cfg, const ReservePolicy& policy,
                      int k, int replications, std::uint64_t seed,
                      int ref_days, int ref_burn_days) {
  if (replications < 2) throw std::invalid_argument("need >= 2 replications");
  if (k < 1) throw std::invalid_argument("day count must be >= 1");
  const LongRunStats ref =
      long_run_payment_stats(cfg, policy, ref_days, ref_burn_days, seed);

  double mean_sum = 0.0;
  double mean_count = 0.0;
  for (int r = 0; r < replications; ++r) {
    // Replication ids are salted with k so different horizons use
    // independent draws.
    const SimResult res =
        run_chain(cfg, policy, k, seed, mix64(static_cast<std::uint64_t>(k)) +
                                            static_cast<std::uint64_t>(r));
    mean_sum += res.arms[0].sum;
    mean_count += static_cast<double>(res.arms[0].count);
  }
  mean_sum /= replications;
  mean_count /= replications;

  WaldReport report;
  report.mean_sum = mean_sum;
  report.mean_count = mean_count;
  report.long_run_mean = ref.mean;
  const double product = ref.mean * mean_count;
  if (product > 0.0) {
    report.relative = true;
    report.discrepancy = std::abs(mean_sum - product) / product;
  } else {
    report.relative = false;
    report.discrepancy = std::abs(mean_sum - product);
  }
  return report;
}

AnscombeReport anscombe_diagnostic(const ScenarioConfig& cfg,
                                   const ReservePolicy& policy, int k,
                                   int replications, std::uint64_t seed,
                                   int warmup_days, int ref_days,
                                   int ref_burn_days) {
  if (replications < 1) throw std::invalid_argument("need >= 1 replication");
  const LongRunStats ref =
      long_run_payment_stats(cfg, policy, ref_days, ref_burn_days, seed);
  AnscombeReport report;
  report.mu = ref.mean;
  report.sigma = ref.sigma;
  report.replications = replications;
  if (ref.sigma <= 0.0) {
    report.degenerate = true;
    return report;
  }

  SimOptions opt;
  opt.warmup_days = warmup_days;
  std::vector<double> zs;
  zs.reserve(replications);
  for (int r = 0; r < replications; ++r) {
    const SimResult res = run_chain(cfg, policy, k, seed, r, opt);
    const double count = static_cast<double>(res.arms[0].count);
    if (count < 1) continue;
    const double rbar = res.arms[0].sum / count;
    zs.push_back((rbar - ref.mean) / (ref.sigma / std::sqrt(count)));
  }
  std::sort(zs.begin(), zs.end());
  report.q025 = quantile(zs, 0.025);
  report.q50 = quantile(zs, 0.5);
  report.q975 = quantile(zs, 0.975);
  return report;
}

CoverageReport coverage_experiment(const ScenarioConfig& cfg, Money v, Money w,
                                   double q, int k, double alpha,
                                   int replications, std::uint64_t seed,
                                   int oracle_replications) {
  if (replications < 1) throw std::invalid_argument("need >= 1 replication");
  const OracleDelta oracle =
      oracle_delta(cfg, v, w, k, oracle_replications,
                   derive_stream(seed, StreamTag::kGeneric, 0xACEDull));

  CoverageReport report;
  report.oracle = oracle.delta;
  report.oracle_se = oracle.std_error;
  report.replications = replications;

  int covered_verbatim = 0;
  int covered_corrected = 0;
  double sum_delta_hat = 0.0;
  double sum_epsilon = 0.0;
  for (int r = 0; r < replications; ++r) {
    const Measurements meas =
        run_experiment(cfg, v, w, q, k, seed, r, /*keep_payments=*/true);
    if (meas.v_count < 4 || meas.w_count < 4) {
      ++report.skipped;
      continue;
    }
    const double sigma_a =
        std::sqrt(batch_means_variance(meas.payments_a).sigma_sq);
    const double sigma_b =
        std::sqrt(batch_means_variance(meas.payments_b).sigma_sq);
    const Money delta_hat = estimate_delta(meas);
    const Money eps = epsilon_bound(meas.v_count, meas.w_count, sigma_a,
                                    sigma_b, q, alpha);
    const Money eps_corr =
        epsilon_bound(meas.v_count, meas.w_count, sigma_a, sigma_b, q, alpha,
                      0.0, 0.0, 0.0, /*corrected=*/true);
    const double err = std::abs(delta_hat - oracle.delta);
    covered_verbatim += (err <= eps);
    covered_corrected += (err <= eps_corr);
    sum_delta_hat += delta_hat;
    sum_epsilon += eps;
  }
  const int effective = replications - report.skipped;
  if (effective > 0) {
    report.coverage_verbatim =
        static_cast<double>(covered_verbatim) / effective;
    report.coverage_corrected =
        static_cast<double>(covered_corrected) / effective;
    report.binomial_se =
        std::sqrt(report.coverage_verbatim * (1.0 - report.coverage_verbatim) /
                  effective);
    report.mean_delta_hat = sum_delta_hat / effective;
    report.mean_epsilon = sum_epsilon / effective;
  }
  return report;
}

}  // namespace adsim
