#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adsim/market.hpp"
#include "adsim/rng.hpp"
#include "adsim/scenario.hpp"

namespace adsim {

// One auction event of the interleaved chain.
struct ImpressionRecord {
  std::int64_t index = 0;  // 1-based within the trajectory
  int day = 0;
  int user = 0;
  int page = 0;
  Money reserve = 0.0;
  BidProfile bids;
  std::optional<int> winner;
  Money payment = 0.0;
  Eigen::VectorXd replenishment;  // full (unsplit) replenishment draw
};

struct Trajectory {
  std::vector<ImpressionRecord> records;
  std::vector<std::int64_t> per_day;  // impressions per simulated day
  Money total = 0.0;                  // S_N, accumulated in event order
  std::uint64_t seed = 0;
};

// Per-treatment-arm tallies of a simulation run.
struct ArmStats {
  std::int64_t count = 0;  // impressions attributed to the arm
  Money sum = 0.0;         // total revenue in the arm
  std::int64_t sold = 0;   // impressions with a winner
  std::vector<Money> payments;            // kept when keep_payments is set
  std::vector<std::int64_t> per_day;
};

struct SimOptions {
  bool keep_records = false;
  bool keep_payments = false;
  int warmup_days = 0;  // simulated but excluded from all tallies
};

struct SimResult {
  std::vector<ArmStats> arms;
  Trajectory trajectory;  // populated when keep_records is set
  std::int64_t total_impressions = 0;
  std::vector<BudgetProfile> final_budgets;  // per arm
};

struct UserSession {
  bool active = false;
  int page = -1;
  int steps = 0;  // impressions served in the current session
};

// Samples the next page for (page, sold?, winner) with the uniform draw u;
// returns -1 for end-of-session. Does not apply the session cap L, which the
// simulator enforces by hard truncation.
int step_user(const ScenarioConfig& cfg, int page, bool sold, int winner,
              double u);

// The interleaved multi-user marketplace chain. One instance drives either
// a single-treatment world (one arm holding the full budgets) or a
// budget-split world (two arms with proportional budget copies and a shared
// clock/arrival process).
class Simulator {
 public:
  struct Arm {
    ReservePolicy policy;
    double budget_fraction = 1.0;  // share of budgets and replenishments
  };

  // `user_arm[u]` routes user u's impressions to an arm. Substreams are
  // derived from (seed, replication): one arrival and one page stream per
  // user, one replenishment stream per advertiser.
  Simulator(const ScenarioConfig& cfg, std::vector<Arm> arms,
            std::vector<int> user_arm, std::uint64_t seed,
            std::uint64_t replication = 0);

  // Advances one tick: idle users flip arrival coins (lowest-index-first
  // admission under the S cap), then every active user generates exactly
  // one impression in user-index order.
  void advance_tick(SimResult& out, const SimOptions& opt);

  // Runs warmup_days + days full days and tallies the final `days` of them.
  SimResult run(int days, const SimOptions& opt = {});

  // State inspection for tests and diagnostics.
  int active_sessions() const { return active_; }
  std::int64_t tick() const { return tick_; }
  int day() const { return static_cast<int>(tick_ / cfg_->ticks_per_day); }
  const std::vector<UserSession>& users() const { return users_; }
  const BudgetProfile& budgets(int arm = 0) const { return budgets_[arm]; }
  int last_active_user() const { return last_user_; }

 private:
  void impression(int user, SimResult& out, const SimOptions& opt);

  const ScenarioConfig* cfg_;
  std::vector<Arm> arms_;
  std::vector<int> user_arm_;
  std::vector<BudgetProfile> budgets_;
  std::vector<UserSession> users_;
  std::vector<Stream> arrival_;  // per user
  std::vector<Stream> page_;     // per user
  std::vector<Stream> zeta_;     // per advertiser
  std::int64_t tick_ = 0;
  std::int64_t n_ = 0;  // impression counter
  int active_ = 0;
  int last_user_ = -1;
  int day_offset_ = 0;  // warmup days already consumed
  bool tallying_ = true;
};

// Single-treatment chain for `days` days under `policy`. The result's
// trajectory is a deterministic function of (cfg, policy, seed, replication).
SimResult run_chain(const ScenarioConfig& cfg, const ReservePolicy& policy,
                    int days, std::uint64_t seed,
                    std::uint64_t replication = 0, const SimOptions& opt = {});

// K_k: number of impressions with day < k. Throws std::out_of_range when k
// exceeds the simulated horizon.
std::int64_t stopping_time(const Trajectory& traj, int k);

// S_n / n over the first n records; n = 0 is an error.
Money partial_average(const Trajectory& traj, std::int64_t n);

}  // namespace adsim
