#pragma once

#include <cstdint>
#include <span>

#include "adsim/market.hpp"

namespace adsim {

// Batch-means estimate of the asymptotic variance of a dependent sequence.
struct VarianceEstimate {
  double sigma_sq = 0.0;
  std::int64_t n = 0;
  std::int64_t batch_size = 0;   // m = floor(sqrt(n))
  std::int64_t batch_count = 0;  // b = floor(n / m)
};

// sigma_sq = m/(b-1) * sum_j (batch_mean_j - grand_mean)^2 over the first
// m*b points. Requires n >= 4.
VarianceEstimate batch_means_variance(std::span<const double> x);

// z with Psi(z) = 1 - alpha/2 for the standard normal CDF Psi. Acklam's
// rational approximation refined by one Halley step against std::erfc;
// absolute error well below 1e-8. Requires 0 < alpha <= 1.
double standard_normal_quantile(double alpha);

// Half-width of the treatment-effect confidence interval:
//   max(2*eta_v*bias_v + (4/q)    * z * sigma_a * sqrt(V),
//       2*eta_v*bias_w + (4/q)    * z * sigma_b * sqrt(W))
// The corrected mode uses 4/(1-q) on the W term, matching the symmetry of
// the two arms.
Money epsilon_bound(std::int64_t v_count, std::int64_t w_count, double sigma_a,
                    double sigma_b, double q, double alpha, double eta_v = 0.0,
                    Money bias_v = 0.0, Money bias_w = 0.0,
                    bool corrected = false);

struct IntervalEstimate {
  Money delta_hat = 0.0;
  Money epsilon = 0.0;  // half-width
  double alpha = 0.05;  // nominal coverage is 1 - 2*alpha

  Money lower() const { return delta_hat - epsilon; }
  Money upper() const { return delta_hat + epsilon; }
};

IntervalEstimate confidence_interval(Money delta_hat, Money epsilon,
                                     double alpha);

// Long-run impressions per day: mean(K_k)/k with a dispersion diagnostic
// (sample standard deviation of K_k/k across the inputs).
struct EtaEstimate {
  double eta = 0.0;
  double dispersion = 0.0;
};

EtaEstimate estimate_eta(std::span<const double> stopping_counts, int k);

// Smallest k with (8/sqrt(2k)) * z * max(sigma_a*sqrt(eta_v),
// sigma_b*sqrt(eta_w)) <= eps0.
std::int64_t plan_horizon(double eps0, double alpha, double sigma_a,
                          double sigma_b, double eta_v, double eta_w);

}  // namespace adsim
