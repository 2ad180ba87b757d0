#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "adsim/permute.hpp"
#include "test_configs.hpp"

using namespace adsim;
using namespace adsim::testing;

namespace {

// Grouping: within each aligned window, every user's entries are contiguous.
bool grouped_per_window(const std::vector<int>& users,
                        const WindowPermutation& perm) {
  const std::int64_t n = static_cast<std::int64_t>(users.size());
  for (std::int64_t begin = 0; begin < n; begin += perm.window) {
    const std::int64_t end = std::min<std::int64_t>(begin + perm.window, n);
    std::vector<int> seen;
    int prev = -1;
    for (std::int64_t pos = begin; pos < end; ++pos) {
      const int u = users[perm.inverse[pos]];
      if (u != prev) {
        if (std::find(seen.begin(), seen.end(), u) != seen.end()) {
          return false;  // user re-appears after its block closed
        }
        seen.push_back(u);
        prev = u;
      }
    }
  }
  return true;
}

bool within_user_order_preserved(const std::vector<int>& users,
                                 const WindowPermutation& perm) {
  for (std::size_t i = 0; i < users.size(); ++i) {
    for (std::size_t j = i + 1; j < users.size(); ++j) {
      if (users[i] == users[j] && perm.forward[i] > perm.forward[j]) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("window permutation reproduces the canonical example") {
  const std::vector<int> users = {1, 2, 1, 3, 2, 1};
  const auto perm = window_permute(users, 6);
  std::vector<int> permuted_users;
  std::vector<std::int64_t> permuted_orig_index;
  for (std::int64_t pos = 0; pos < 6; ++pos) {
    permuted_users.push_back(users[perm.inverse[pos]]);
    permuted_orig_index.push_back(perm.inverse[pos] + 1);  // 1-based
  }
  CHECK(permuted_users == std::vector<int>{1, 1, 1, 2, 2, 3});
  CHECK(permuted_orig_index == std::vector<std::int64_t>{1, 3, 6, 2, 5, 4});
}

TEST_CASE("all-same-user sequence is the identity") {
  const std::vector<int> users(10, 4);
  const auto perm = window_permute(users, 3);
  for (std::int64_t i = 0; i < 10; ++i) CHECK(perm.forward[i] == i);
}

TEST_CASE("unique valid grouping found by brute force") {
  // For (2,1,2) with T=3 exactly one of the 6 permutations of 3 elements
  // groups users, preserves within-user order, and orders blocks by first
  // appearance. Verify ours is that one.
  const std::vector<int> users = {2, 1, 2};
  const auto perm = window_permute(users, 3);
  std::vector<int> permuted;
  for (int pos = 0; pos < 3; ++pos) permuted.push_back(users[perm.inverse[pos]]);
  CHECK(permuted == std::vector<int>{2, 2, 1});
  CHECK(perm.inverse == std::vector<std::int64_t>{0, 2, 1});

  std::vector<std::int64_t> candidate = {0, 1, 2};
  int valid = 0;
  do {
    bool blocks_ok = true;
    int prev = -1;
    std::vector<int> seen;
    for (int pos = 0; pos < 3; ++pos) {
      const int u = users[candidate[pos]];
      if (u != prev) {
        if (std::find(seen.begin(), seen.end(), u) != seen.end()) {
          blocks_ok = false;
        }
        seen.push_back(u);
        prev = u;
      }
    }
    bool order_ok = true;
    for (int i = 0; i < 3 && order_ok; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        if (users[candidate[i]] == users[candidate[j]] &&
            candidate[i] > candidate[j]) {
          order_ok = false;
          break;
        }
      }
    }
    const bool first_appearance_ok = seen == std::vector<int>{2, 1};
    if (blocks_ok && order_ok && first_appearance_ok) {
      ++valid;
      CHECK(candidate == perm.inverse);
    }
  } while (std::next_permutation(candidate.begin(), candidate.end()));
  CHECK(valid == 1);
}

TEST_CASE("permutation properties on random sequences") {
  Stream rng(derive_stream(21, StreamTag::kGeneric));
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 60);
    const int num_users = 1 + static_cast<int>(rng.uniform() * 6);
    const int T = 1 + static_cast<int>(rng.uniform() * 20);
    std::vector<int> users(n);
    for (int i = 0; i < n; ++i) {
      users[i] = static_cast<int>(rng.uniform() * num_users);
    }
    const auto perm = window_permute(users, T);

    // Bijection: forward and inverse compose to the identity.
    for (std::int64_t i = 0; i < n; ++i) {
      REQUIRE(perm.inverse[perm.forward[i]] == i);
      REQUIRE(std::abs(perm.forward[i] - i) < T);  // locality
    }
    REQUIRE(grouped_per_window(users, perm));
    REQUIRE(within_user_order_preserved(users, perm));
  }
}

TEST_CASE("apply_permutation preserves the multiset and round-trips") {
  auto cfg = two_page_config();
  SimOptions opt;
  opt.keep_records = true;
  const auto res =
      run_chain(cfg, ReservePolicy::constant(1.0), 10, 17, 0, opt);
  const auto& traj = res.trajectory;
  REQUIRE(traj.records.size() > 20);

  std::vector<int> users;
  for (const auto& rec : traj.records) users.push_back(rec.user);
  const auto perm =
      window_permute(users, cfg.session_cap * cfg.concurrency_cap);
  const auto permuted = apply_permutation(traj, perm);

  std::vector<std::pair<int, int>> before, after;
  for (const auto& rec : traj.records) before.emplace_back(rec.user, rec.page);
  for (const auto& rec : permuted) after.emplace_back(rec.user, rec.page);
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  CHECK(before == after);

  // Sorting the permuted records by original index reproduces the input.
  std::vector<const ImpressionRecord*> sorted;
  for (const auto& rec : permuted) sorted.push_back(&rec);
  std::sort(sorted.begin(), sorted.end(),
            [](auto* a, auto* b) { return a->index < b->index; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    CHECK(sorted[i]->index == traj.records[i].index);
  }

  WindowPermutation bad = perm;
  bad.forward.pop_back();
  bad.inverse.pop_back();
  CHECK_THROWS_AS(apply_permutation(traj, bad), std::invalid_argument);
}

TEST_CASE("budget replay") {
  auto cfg = two_page_config();
  SimOptions opt;
  opt.keep_records = true;

  SUBCASE("empty sequence") {
    const auto replay = replay_budgets({}, cfg.initial_budgets, cfg);
    CHECK(replay.total == 0.0);
    CHECK(replay.budgets.empty());
  }

  SUBCASE("identity permutation reproduces the original run") {
    const auto res =
        run_chain(cfg, ReservePolicy::constant(1.0), 10, 23, 0, opt);
    const auto replay =
        replay_budgets(res.trajectory.records, cfg.initial_budgets, cfg);
    CHECK(replay.total == res.trajectory.total);
    REQUIRE(!replay.budgets.empty());
    CHECK((replay.budgets.back() - res.final_budgets[0])
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }

  SUBCASE("non-binding budgets: permuted replay matches total exactly") {
    cfg.initial_budgets = Eigen::Vector2d(1e6, 1e6);  // >= N * B
    cfg.replenishment = {{0.0, 0.0}, {0.0, 0.0}};
    const auto res =
        run_chain(cfg, ReservePolicy::constant(1.0), 10, 29, 0, opt);
    std::vector<int> users;
    for (const auto& rec : res.trajectory.records) users.push_back(rec.user);
    const auto perm =
        window_permute(users, cfg.session_cap * cfg.concurrency_cap);
    const auto permuted = apply_permutation(res.trajectory, perm);
    const auto replay = replay_budgets(permuted, cfg.initial_budgets, cfg);
    const auto gap =
        permutation_gap(res.trajectory, res.final_budgets[0], replay);
    CHECK(gap.revenue_gap == 0.0);
    CHECK(gap.terminal_budget_gap.maxCoeff() < 1e-9);
  }
}
