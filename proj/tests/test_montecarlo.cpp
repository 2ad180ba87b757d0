#include <doctest.h>

#include <cmath>

#include "adsim/montecarlo.hpp"
#include "test_configs.hpp"

using namespace adsim;
using namespace adsim::testing;

TEST_CASE("oracle_delta") {
  const auto cfg = two_page_config();

  SUBCASE("equal treatments estimate zero within Monte Carlo error") {
    const auto oracle = oracle_delta(cfg, 1.0, 1.0, 4, 300, 51);
    CHECK(oracle.replications == 300);
    CHECK(std::abs(oracle.delta) < 4.0 * oracle.std_error + 1e-12);
    CHECK(oracle.mean_v > 0.0);
  }

  SUBCASE("standard error shrinks like 1/sqrt(R)") {
    const auto small = oracle_delta(cfg, 1.0, 1.8, 3, 100, 7);
    const auto big = oracle_delta(cfg, 1.0, 1.8, 3, 1600, 7);
    CHECK(big.std_error < small.std_error);
    const double ratio = small.std_error / big.std_error;
    CHECK(ratio > 2.0);  // expected 4, wide tolerance for estimate noise
    CHECK(ratio < 8.0);
  }

  SUBCASE("deterministic in the seed") {
    const auto x = oracle_delta(cfg, 1.0, 1.5, 3, 50, 9);
    const auto y = oracle_delta(cfg, 1.0, 1.5, 3, 50, 9);
    CHECK(x.delta == y.delta);
    CHECK(x.std_error == y.std_error);
  }

  CHECK_THROWS_AS(oracle_delta(cfg, 1.0, 1.0, 3, 1, 9), std::invalid_argument);
}

TEST_CASE("long_run_payment_stats on the flat scenario is exactly degenerate") {
  const auto cfg = flat_config();
  const auto stats =
      long_run_payment_stats(cfg, ReservePolicy::constant(1.0), 200, 20, 13);
  CHECK(stats.n > 100);
  CHECK(stats.mean == 1.0);
  CHECK(stats.sigma == 0.0);
}

TEST_CASE("wald_check") {
  SUBCASE("flat scenario: identity holds exactly") {
    const auto cfg = flat_config();
    const auto report =
        wald_check(cfg, ReservePolicy::constant(1.0), 20, 40, 101, 400, 40);
    CHECK(report.relative);
    CHECK(report.discrepancy < 1e-12);
    CHECK(report.long_run_mean == 1.0);
  }

  SUBCASE("markov scenario: small relative discrepancy") {
    const auto cfg = two_page_rich_config();
    const auto report =
        wald_check(cfg, ReservePolicy::constant(1.0), 40, 200, 303, 2000, 100);
    CHECK(report.mean_count > 0.0);
    CHECK(report.discrepancy < 0.05);
  }
}

TEST_CASE("anscombe_diagnostic flags zero-variance payments as degenerate") {
  const auto cfg = flat_config();
  const auto report = anscombe_diagnostic(
      cfg, ReservePolicy::constant(1.0), 10, 50, 17, 2, 400, 40);
  CHECK(report.degenerate);
  CHECK(report.sigma == 0.0);
}

TEST_CASE("anscombe_diagnostic quantiles are near normal on a markov chain") {
  const auto cfg = two_page_rich_config();
  const auto report = anscombe_diagnostic(
      cfg, ReservePolicy::constant(1.0), 60, 800, 23, 5, 3000, 100);
  CHECK(!report.degenerate);
  CHECK(report.replications == 800);
  CHECK(std::abs(report.q025 + 1.96) < 0.35);
  CHECK(std::abs(report.q50) < 0.25);
  CHECK(std::abs(report.q975 - 1.96) < 0.35);
}

TEST_CASE("coverage_experiment reaches the nominal level on a small scenario") {
  const auto cfg = two_page_config();
  const auto report =
      coverage_experiment(cfg, 1.0, 1.2, 0.5, 30, 0.05, 60, 29, 200);
  CHECK(report.replications == 60);
  CHECK(report.skipped < 10);
  CHECK(report.mean_epsilon > 0.0);
  // The interval is conservative by construction; demand at least nominal
  // coverage minus binomial noise.
  CHECK(report.coverage_verbatim >= 0.90 - 3.0 * report.binomial_se);
  CHECK(report.coverage_corrected <= report.coverage_verbatim + 1e-12);
}
