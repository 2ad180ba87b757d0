#include "adsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace adsim {

VarianceEstimate batch_means_variance(std::span<const double> x) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  if (n < 4) throw std::invalid_argument("batch means needs n >= 4");
  const std::int64_t m =
      static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n))));
  const std::int64_t b = n / m;
  const std::int64_t used = m * b;

  double grand = 0.0;
  for (std::int64_t i = 0; i < used; ++i) grand += x[i];
  grand /= static_cast<double>(used);

  double ss = 0.0;
  for (std::int64_t j = 0; j < b; ++j) {
    double mean = 0.0;
    for (std::int64_t i = j * m; i < (j + 1) * m; ++i) mean += x[i];
    mean /= static_cast<double>(m);
    ss += (mean - grand) * (mean - grand);
  }

  VarianceEstimate est;
  est.n = n;
  est.batch_size = m;
  est.batch_count = b;
  est.sigma_sq = static_cast<double>(m) / static_cast<double>(b - 1) * ss;
  return est;
}

namespace {

// Acklam's rational approximation to the standard normal inverse CDF
// (relative error < 1.2e-9), refined by one Halley step against std::erfc.
double normal_ppf(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double u = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double u = p - 0.5;
    const double t = u * u;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) *
        u /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u +
          c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }

  // Halley refinement: e = Psi(x) - p.
  const double e = 0.5 * std::erfc(-x / 1.4142135623730951) - p;
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace

double standard_normal_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in (0, 1]");
  }
  return normal_ppf(1.0 - alpha / 2.0);
}

Money epsilon_bound(std::int64_t v_count, std::int64_t w_count, double sigma_a,
                    double sigma_b, double q, double alpha, double eta_v,
                    Money bias_v, Money bias_w, bool corrected) {
  if (v_count < 1 || w_count < 1) {
    throw std::invalid_argument("counts must be >= 1");
  }
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("q must be in (0, 1)");
  const double z = standard_normal_quantile(alpha);
  const double w_factor = corrected ? 4.0 / (1.0 - q) : 4.0 / q;
  const double term_a = 2.0 * eta_v * bias_v +
                        (4.0 / q) * z * sigma_a *
                            std::sqrt(static_cast<double>(v_count));
  const double term_b = 2.0 * eta_v * bias_w +
                        w_factor * z * sigma_b *
                            std::sqrt(static_cast<double>(w_count));
  return std::max(term_a, term_b);
}

IntervalEstimate confidence_interval(Money delta_hat, Money epsilon,
                                     double alpha) {
  if (epsilon < 0) throw std::invalid_argument("epsilon must be >= 0");
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument("alpha must be in (0, 0.5)");
  }
  return IntervalEstimate{delta_hat, epsilon, alpha};
}

EtaEstimate estimate_eta(std::span<const double> stopping_counts, int k) {
  if (k < 1) throw std::invalid_argument("day count must be >= 1");
  EtaEstimate est;
  if (stopping_counts.empty()) return est;
  double mean = 0.0;
  for (double c : stopping_counts) mean += c / k;
  mean /= static_cast<double>(stopping_counts.size());
  est.eta = mean;
  if (stopping_counts.size() > 1) {
    double ss = 0.0;
    for (double c : stopping_counts) {
      ss += (c / k - mean) * (c / k - mean);
    }
    est.dispersion =
        std::sqrt(ss / static_cast<double>(stopping_counts.size() - 1));
  }
  return est;
}

std::int64_t plan_horizon(double eps0, double alpha, double sigma_a,
                          double sigma_b, double eta_v, double eta_w) {
  if (eps0 <= 0.0) throw std::invalid_argument("eps0 must be positive");
  const double z = standard_normal_quantile(alpha);
  const double spread =
      std::max(sigma_a * std::sqrt(eta_v), sigma_b * std::sqrt(eta_w));
  const double x = 8.0 * z * spread / eps0;
  return static_cast<std::int64_t>(std::ceil(x * x / 2.0));
}

}  // namespace adsim
