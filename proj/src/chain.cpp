#include "adsim/chain.hpp"

#include <stdexcept>
#include <utility>

namespace adsim {

int step_user(const ScenarioConfig& cfg, int page, bool sold, int winner,
              double u) {
  return cfg.kernel(page, sold, winner).sample(u);
}

Simulator::Simulator(const ScenarioConfig& cfg, std::vector<Arm> arms,
                     std::vector<int> user_arm, std::uint64_t seed,
                     std::uint64_t replication)
    : cfg_(&cfg), arms_(std::move(arms)), user_arm_(std::move(user_arm)) {
  if (arms_.empty()) throw std::invalid_argument("need at least one arm");
  if (static_cast<int>(user_arm_.size()) != cfg.num_users) {
    throw std::invalid_argument("user_arm size mismatch");
  }
  budgets_.reserve(arms_.size());
  for (const auto& arm : arms_) {
    budgets_.push_back(arm.budget_fraction * cfg.initial_budgets);
  }
  users_.resize(cfg.num_users);
  arrival_.reserve(cfg.num_users);
  page_.reserve(cfg.num_users);
  for (int u = 0; u < cfg.num_users; ++u) {
    arrival_.emplace_back(
        derive_stream(seed, StreamTag::kArrival, replication, u));
    page_.emplace_back(
        derive_stream(seed, StreamTag::kPageStep, replication, u));
  }
  zeta_.reserve(cfg.num_advertisers);
  for (int j = 0; j < cfg.num_advertisers; ++j) {
    zeta_.emplace_back(
        derive_stream(seed, StreamTag::kReplenish, replication, j));
  }
}

void Simulator::impression(int user, SimResult& out, const SimOptions& opt) {
  const int arm_ix = user_arm_[user];
  const Arm& arm = arms_[arm_ix];
  UserSession& session = users_[user];
  const int page = session.page;

  const Money reserve = arm.policy.at(page);
  AuctionOutcome outcome =
      run_auction(reserve, cfg_->valuations.row(page), budgets_[arm_ix]);

  // One replenishment draw per advertiser per impression; each arm receives
  // its proportional share of the full amount.
  Eigen::VectorXd repl(cfg_->num_advertisers);
  for (int j = 0; j < cfg_->num_advertisers; ++j) {
    const auto& rp = cfg_->replenishment[j];
    repl[j] = zeta_[j].bernoulli(rp.prob) ? rp.amount : 0.0;
  }
  for (std::size_t a = 0; a < arms_.size(); ++a) {
    budgets_[a] += arms_[a].budget_fraction * repl;
  }
  if (outcome.winner) {
    const int w = *outcome.winner;
    if (outcome.payment > budgets_[arm_ix][w] + 1e-12) {
      throw std::logic_error("payment exceeds winner's remaining budget");
    }
    budgets_[arm_ix][w] -= outcome.payment;
  }

  last_user_ = user;

  const int day = static_cast<int>(tick_ / cfg_->ticks_per_day) - day_offset_;
  if (tallying_) {
    ++n_;
    ArmStats& stats = out.arms[arm_ix];
    ++stats.count;
    stats.sum += outcome.payment;
    if (outcome.sold()) ++stats.sold;
    if (static_cast<int>(stats.per_day.size()) <= day) {
      stats.per_day.resize(day + 1, 0);
    }
    ++stats.per_day[day];
    if (opt.keep_payments) stats.payments.push_back(outcome.payment);

    ++out.total_impressions;
    if (opt.keep_records) {
      Trajectory& traj = out.trajectory;
      ImpressionRecord rec;
      rec.index = n_;
      rec.day = day;
      rec.user = user;
      rec.page = page;
      rec.reserve = reserve;
      rec.bids = outcome.bids;
      rec.winner = outcome.winner;
      rec.payment = outcome.payment;
      rec.replenishment = repl;
      traj.records.push_back(std::move(rec));
      traj.total += outcome.payment;
      if (static_cast<int>(traj.per_day.size()) <= day) {
        traj.per_day.resize(day + 1, 0);
      }
      ++traj.per_day[day];
    }
  }

  // Page transition, with hard truncation at L impressions per session.
  ++session.steps;
  int next = -1;
  if (session.steps < cfg_->session_cap) {
    next = step_user(*cfg_, page, outcome.sold(),
                     outcome.winner ? *outcome.winner : -1,
                     page_[user].uniform());
  }
  if (next < 0) {
    session.active = false;
    session.page = -1;
    session.steps = 0;
    --active_;
  } else {
    session.page = next;
  }
}

void Simulator::advance_tick(SimResult& out, const SimOptions& opt) {
  // Arrivals: every idle user flips its coin each tick (keeps the streams
  // aligned across treatments); admission is lowest-index-first under S.
  for (int u = 0; u < cfg_->num_users; ++u) {
    if (users_[u].active) continue;
    const bool wants = arrival_[u].bernoulli(cfg_->arrival_prob);
    if (wants && active_ < cfg_->concurrency_cap) {
      users_[u].active = true;
      users_[u].steps = 0;
      int start = -1;
      double cum = 0.0;
      const double x = page_[u].uniform();
      for (Eigen::Index i = 0; i < cfg_->session_start.size(); ++i) {
        cum += cfg_->session_start[i];
        if (x < cum) {
          start = static_cast<int>(i);
          break;
        }
      }
      if (start < 0) start = static_cast<int>(cfg_->session_start.size()) - 1;
      users_[u].page = start;
      ++active_;
    }
  }
  for (int u = 0; u < cfg_->num_users; ++u) {
    if (users_[u].active) impression(u, out, opt);
  }
  ++tick_;
}

SimResult Simulator::run(int days, const SimOptions& opt) {
  if (days < 0) throw std::invalid_argument("day count must be nonnegative");
  SimResult out;
  out.arms.resize(arms_.size());

  if (opt.warmup_days > 0) {
    tallying_ = false;
    const std::int64_t warm_ticks =
        static_cast<std::int64_t>(opt.warmup_days) * cfg_->ticks_per_day;
    for (std::int64_t t = 0; t < warm_ticks; ++t) advance_tick(out, opt);
    day_offset_ = opt.warmup_days;
    tallying_ = true;
  }

  const std::int64_t ticks =
      static_cast<std::int64_t>(days) * cfg_->ticks_per_day;
  for (std::int64_t t = 0; t < ticks; ++t) advance_tick(out, opt);

  for (auto& stats : out.arms) {
    if (static_cast<int>(stats.per_day.size()) < days) {
      stats.per_day.resize(days, 0);
    }
  }
  if (opt.keep_records &&
      static_cast<int>(out.trajectory.per_day.size()) < days) {
    out.trajectory.per_day.resize(days, 0);
  }
  out.final_budgets = budgets_;
  return out;
}

SimResult run_chain(const ScenarioConfig& cfg, const ReservePolicy& policy,
                    int days, std::uint64_t seed, std::uint64_t replication,
                    const SimOptions& opt) {
  Simulator sim(cfg, {Simulator::Arm{policy, 1.0}},
                std::vector<int>(cfg.num_users, 0), seed, replication);
  SimResult result = sim.run(days, opt);
  result.trajectory.seed = seed;
  return result;
}

std::int64_t stopping_time(const Trajectory& traj, int k) {
  if (k < 0) throw std::out_of_range("negative day count");
  if (k > static_cast<int>(traj.per_day.size())) {
    throw std::out_of_range("day count exceeds the simulated horizon");
  }
  std::int64_t count = 0;
  for (int d = 0; d < k; ++d) count += traj.per_day[d];
  return count;
}

Money partial_average(const Trajectory& traj, std::int64_t n) {
  if (n < 1 || n > static_cast<std::int64_t>(traj.records.size())) {
    throw std::invalid_argument("partial average needs 1 <= n <= N");
  }
  Money sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) sum += traj.records[i].payment;
  return sum / static_cast<double>(n);
}

}  // namespace adsim
