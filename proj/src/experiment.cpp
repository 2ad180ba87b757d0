#include "adsim/experiment.hpp"

#include <stdexcept>

namespace adsim {

std::int64_t Assignment::count_a() const {
  std::int64_t n = 0;
  for (int g : group) n += (g == 0);
  return n;
}

Assignment assign_users(int d, double q, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("need at least one user");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("q must be in [0, 1]");
  Assignment a;
  a.q = q;
  a.seed = seed;
  a.group.resize(d);
  Stream stream(derive_stream(seed, StreamTag::kAssignment));
  for (int u = 0; u < d; ++u) a.group[u] = stream.bernoulli(q) ? 0 : 1;
  return a;
}

std::pair<BudgetProfile, BudgetProfile> split_budgets(
    const BudgetProfile& budgets, double q) {
  if (budgets.size() > 0 && budgets.minCoeff() < 0) {
    throw std::invalid_argument("budgets must be nonnegative");
  }
  return {q * budgets, (1.0 - q) * budgets};
}

Measurements run_experiment(const ScenarioConfig& cfg, Money v, Money w,
                            double q, int k, std::uint64_t seed,
                            std::uint64_t replication, bool keep_payments) {
  if (v < 0 || w < 0) throw std::invalid_argument("reserves must be >= 0");
  if (q <= 0.0 || q >= 1.0) throw std::invalid_argument("q must be in (0, 1)");
  if (k < 0) throw std::invalid_argument("day count must be nonnegative");

  Assignment assignment = assign_users(
      cfg.num_users, q, derive_stream(seed, StreamTag::kAssignment,
                                      replication));
  Simulator sim(cfg,
                {Simulator::Arm{ReservePolicy::constant(v), q},
                 Simulator::Arm{ReservePolicy::constant(w), 1.0 - q}},
                assignment.group, seed, replication);
  SimOptions opt;
  opt.keep_payments = keep_payments;
  SimResult result = sim.run(k, opt);

  Measurements meas;
  meas.days = k;
  meas.q = q;
  meas.v_count = result.arms[0].count;
  meas.w_count = result.arms[1].count;
  meas.sum_a = result.arms[0].sum;
  meas.sum_b = result.arms[1].sum;
  meas.rbar_a_defined = meas.v_count > 0;
  meas.rbar_b_defined = meas.w_count > 0;
  if (meas.rbar_a_defined) meas.rbar_a = meas.sum_a / meas.v_count;
  if (meas.rbar_b_defined) meas.rbar_b = meas.sum_b / meas.w_count;
  if (keep_payments) {
    meas.payments_a = std::move(result.arms[0].payments);
    meas.payments_b = std::move(result.arms[1].payments);
  }
  return meas;
}

Money estimate_delta(const Measurements& meas) {
  if (meas.v_count < 1 || meas.w_count < 1) {
    throw std::invalid_argument(
        "estimate undefined: an arm has zero impressions");
  }
  return (meas.v_count / meas.q) * meas.rbar_a -
         (meas.w_count / (1.0 - meas.q)) * meas.rbar_b;
}

}  // namespace adsim
