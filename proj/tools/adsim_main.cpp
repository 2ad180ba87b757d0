#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adsim/experiment.hpp"
#include "adsim/io.hpp"
#include "adsim/montecarlo.hpp"
#include "adsim/permute.hpp"
#include "adsim/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adsim;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

void finish(const std::string& command, const fs::path& out_dir,
            std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& outputs) {
  RunManifest manifest;
  manifest.command = command;
  manifest.config_hash = config_hash;
  manifest.seed = seed;
  manifest.timestamp = now_utc();
  manifest.outputs = outputs;
  write_manifest(manifest, out_dir);
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marketplace simulator and treatment-effect inference toolkit"};
  app.set_version_flag("--version", std::string("adsim ") + kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir_s = "out";
  std::uint64_t seed = 1;
  int days = 10;
  int reps = 100;
  double alpha = 0.05;
  double q = 0.5;
  double reserve_v = 1.5;
  double reserve_w = 0.5;
  bool corrected = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config) {
      cmd->add_option("--config", config_path, "scenario JSON file")
          ->required();
    }
    cmd->add_option("--out-dir", out_dir_s, "output directory");
    cmd->add_option("--seed", seed, "manifest seed");
  };

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run one chain");
  add_common(sim_cmd, true);
  bool log_impressions = false;
  sim_cmd->add_option("--days", days, "horizon in days");
  sim_cmd->add_option("--reserve-v", reserve_v, "constant reserve price");
  sim_cmd->add_flag("--log-impressions", log_impressions,
                    "write the full impression log CSV");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "budget-split experiment");
  add_common(exp_cmd, true);
  exp_cmd->add_option("--days", days, "horizon in days");
  exp_cmd->add_option("--q", q, "A-group probability");
  exp_cmd->add_option("--alpha", alpha, "per-arm significance level");
  exp_cmd->add_option("--reserve-v", reserve_v, "treatment reserve");
  exp_cmd->add_option("--reserve-w", reserve_w, "baseline reserve");
  exp_cmd->add_flag("--corrected-epsilon", corrected,
                    "use 4/(1-q) on the W-arm term");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Monte Carlo effect oracle");
  add_common(oracle_cmd, true);
  oracle_cmd->add_option("--days", days, "horizon in days");
  oracle_cmd->add_option("--reps", reps, "replications per treatment");
  oracle_cmd->add_option("--reserve-v", reserve_v, "treatment reserve");
  oracle_cmd->add_option("--reserve-w", reserve_w, "baseline reserve");

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "interval coverage study");
  add_common(cov_cmd, true);
  int oracle_reps = 1000;
  cov_cmd->add_option("--days", days, "horizon in days");
  cov_cmd->add_option("--reps", reps, "experiment replications");
  cov_cmd->add_option("--alpha", alpha, "per-arm significance level");
  cov_cmd->add_option("--q", q, "A-group probability");
  cov_cmd->add_option("--reserve-v", reserve_v, "treatment reserve");
  cov_cmd->add_option("--reserve-w", reserve_w, "baseline reserve");
  cov_cmd->add_option("--oracle-reps", oracle_reps, "oracle replications");

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "horizon planner");
  add_common(plan_cmd, false);
  double eps0 = 1.0, sigma_a = 1.0, sigma_b = 1.0, eta_v = 100.0,
         eta_w = 100.0;
  plan_cmd->add_option("--eps0", eps0, "target precision per day")->required();
  plan_cmd->add_option("--alpha", alpha, "per-arm significance level");
  plan_cmd->add_option("--sigma-a", sigma_a, "A-arm asymptotic sigma");
  plan_cmd->add_option("--sigma-b", sigma_b, "B-arm asymptotic sigma");
  plan_cmd->add_option("--eta-v", eta_v, "impressions/day under v");
  plan_cmd->add_option("--eta-w", eta_w, "impressions/day under w");

  // permute-demo
  auto* perm_cmd =
      app.add_subcommand("permute-demo", "window permutation table");
  add_common(perm_cmd, false);
  std::string users_s = "1,2,1,3,2,1";
  int window = 6;
  perm_cmd->add_option("--users", users_s, "active-user sequence");
  perm_cmd->add_option("--window", window, "window length T");

  // revenue-curve
  auto* rev_cmd =
      app.add_subcommand("revenue-curve", "revenue vs reserve grid");
  add_common(rev_cmd, false);
  std::string bids_s = "1,2";
  double grid_min = 0.0, grid_max = 3.0, grid_step = 0.01;
  rev_cmd->add_option("--bids", bids_s, "fixed bid profile");
  rev_cmd->add_option("--min", grid_min, "grid start");
  rev_cmd->add_option("--max", grid_max, "grid end");
  rev_cmd->add_option("--step", grid_step, "grid step");

  // diagnostics
  auto* diag_cmd =
      app.add_subcommand("diagnostics", "Wald and normality checks");
  add_common(diag_cmd, true);
  std::string wald_days_s = "10,50,250";
  int anscombe_reps = 2000;
  int wald_reps = 200;
  int warmup_days = 5;
  int ref_days = 2000;
  diag_cmd->add_option("--days", days, "horizon for the normality check");
  diag_cmd->add_option("--reps", anscombe_reps, "normality replications");
  diag_cmd->add_option("--wald-reps", wald_reps, "replications per Wald k");
  diag_cmd->add_option("--wald-days", wald_days_s, "k values for the Wald check");
  diag_cmd->add_option("--reserve-v", reserve_v, "constant reserve price");
  diag_cmd->add_option("--warmup-days", warmup_days,
                       "warm-up days before tallying");
  diag_cmd->add_option("--ref-days", ref_days, "long-run reference horizon");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path out_dir(out_dir_s);
    fs::create_directories(out_dir);
    std::uint64_t config_hash = 0;
    ScenarioConfig cfg;
    if (!config_path.empty()) {
      cfg = load_config(config_path);
      config_hash = hash_file(config_path);
    }

    if (*sim_cmd) {
      const auto policy = ReservePolicy::constant(reserve_v);
      SimOptions opt;
      opt.keep_records = log_impressions;
      const SimResult res = run_chain(cfg, policy, days, seed, 0, opt);
      json doc;
      doc["days"] = days;
      doc["reserve"] = reserve_v;
      doc["impressions"] = res.arms[0].count;
      doc["sold"] = res.arms[0].sold;
      doc["total_revenue"] = res.arms[0].sum;
      doc["per_day"] = res.arms[0].per_day;
      write_text(out_dir / "trajectory.json", doc.dump(2) + "\n");
      std::vector<std::string> outputs = {"trajectory.json"};
      if (log_impressions) {
        std::ostringstream csv;
        csv << "n,day,user,page,reserve,max_bid,second_bid,winner,payment\n";
        for (const auto& rec : res.trajectory.records) {
          double top = rec.bids[0], second = -1;
          for (Eigen::Index i = 1; i < rec.bids.size(); ++i) {
            if (rec.bids[i] > top) {
              second = top;
              top = rec.bids[i];
            } else if (rec.bids[i] > second) {
              second = rec.bids[i];
            }
          }
          if (second < 0) second = 0;
          csv << rec.index << ',' << rec.day << ',' << rec.user << ','
              << cfg.pages[rec.page] << ',' << fmt(rec.reserve) << ','
              << fmt(top) << ',' << fmt(second) << ','
              << (rec.winner ? std::to_string(*rec.winner) : "") << ','
              << fmt(rec.payment) << '\n';
        }
        write_text(out_dir / "impressions.csv", csv.str());
        outputs.push_back("impressions.csv");
      }
      finish("simulate", out_dir, config_hash, seed, outputs);
    } else if (*exp_cmd) {
      const Measurements meas = run_experiment(cfg, reserve_v, reserve_w, q,
                                               days, seed, 0, true);
      json doc;
      doc["k"] = days;
      doc["q"] = q;
      doc["v"] = reserve_v;
      doc["w"] = reserve_w;
      doc["V_k"] = meas.v_count;
      doc["W_k"] = meas.w_count;
      doc["rbar_A"] = meas.rbar_a;
      doc["rbar_B"] = meas.rbar_b;
      doc["rbar_A_defined"] = meas.rbar_a_defined;
      doc["rbar_B_defined"] = meas.rbar_b_defined;
      if (meas.v_count >= 4 && meas.w_count >= 4) {
        const double sa =
            std::sqrt(batch_means_variance(meas.payments_a).sigma_sq);
        const double sb =
            std::sqrt(batch_means_variance(meas.payments_b).sigma_sq);
        const Money delta_hat = estimate_delta(meas);
        const Money eps =
            epsilon_bound(meas.v_count, meas.w_count, sa, sb, q, alpha, 0.0,
                          0.0, 0.0, corrected);
        const IntervalEstimate ci = confidence_interval(delta_hat, eps, alpha);
        doc["sigma_A"] = sa;
        doc["sigma_B"] = sb;
        doc["delta_hat"] = delta_hat;
        doc["delta_hat_per_day"] = delta_hat / days;
        doc["epsilon"] = eps;
        doc["epsilon_corrected_mode"] = corrected;
        doc["alpha"] = alpha;
        doc["nominal_coverage"] = 1.0 - 2.0 * alpha;
        doc["interval"] = {ci.lower(), ci.upper()};
        doc["eta_v_hat"] = meas.v_count / (q * days);
        doc["eta_w_hat"] = meas.w_count / ((1.0 - q) * days);
      }
      write_text(out_dir / "experiment.json", doc.dump(2) + "\n");
      std::ostringstream csv;
      csv << "seed,k,q,v,w,V_k,W_k,rbar_A,rbar_B,delta_hat\n";
      csv << seed << ',' << days << ',' << fmt(q) << ',' << fmt(reserve_v)
          << ',' << fmt(reserve_w) << ',' << meas.v_count << ','
          << meas.w_count << ',' << fmt(meas.rbar_a) << ',' << fmt(meas.rbar_b)
          << ','
          << ((meas.v_count > 0 && meas.w_count > 0)
                  ? fmt(estimate_delta(meas))
                  : "")
          << '\n';
      write_text(out_dir / "measurements.csv", csv.str());
      finish("experiment", out_dir, config_hash, seed,
             {"experiment.json", "measurements.csv"});
    } else if (*oracle_cmd) {
      const OracleDelta oracle =
          oracle_delta(cfg, reserve_v, reserve_w, days, reps, seed);
      json doc;
      doc["k"] = days;
      doc["v"] = reserve_v;
      doc["w"] = reserve_w;
      doc["replications"] = oracle.replications;
      doc["delta"] = oracle.delta;
      doc["delta_per_day"] = oracle.delta / days;
      doc["std_error"] = oracle.std_error;
      doc["mean_S_v"] = oracle.mean_v;
      doc["mean_S_w"] = oracle.mean_w;
      write_text(out_dir / "oracle.json", doc.dump(2) + "\n");
      finish("oracle", out_dir, config_hash, seed, {"oracle.json"});
    } else if (*cov_cmd) {
      const CoverageReport report = coverage_experiment(
          cfg, reserve_v, reserve_w, q, days, alpha, reps, seed, oracle_reps);
      json doc;
      doc["k"] = days;
      doc["q"] = q;
      doc["alpha"] = alpha;
      doc["v"] = reserve_v;
      doc["w"] = reserve_w;
      doc["replications"] = report.replications;
      doc["coverage_verbatim"] = report.coverage_verbatim;
      doc["coverage_corrected"] = report.coverage_corrected;
      doc["binomial_se"] = report.binomial_se;
      doc["nominal"] = 1.0 - 2.0 * alpha;
      doc["oracle_delta"] = report.oracle;
      doc["oracle_se"] = report.oracle_se;
      doc["mean_delta_hat"] = report.mean_delta_hat;
      doc["mean_epsilon"] = report.mean_epsilon;
      doc["skipped"] = report.skipped;
      write_text(out_dir / "coverage.json", doc.dump(2) + "\n");
      finish("coverage", out_dir, config_hash, seed, {"coverage.json"});
    } else if (*plan_cmd) {
      const std::int64_t k =
          plan_horizon(eps0, alpha, sigma_a, sigma_b, eta_v, eta_w);
      json doc;
      doc["eps0"] = eps0;
      doc["alpha"] = alpha;
      doc["sigma_A"] = sigma_a;
      doc["sigma_B"] = sigma_b;
      doc["eta_v"] = eta_v;
      doc["eta_w"] = eta_w;
      doc["k"] = k;
      write_text(out_dir / "plan.json", doc.dump(2) + "\n");
      finish("plan", out_dir, config_hash, seed, {"plan.json"});
    } else if (*perm_cmd) {
      const std::vector<int> users = parse_ints(users_s);
      const WindowPermutation perm = window_permute(users, window);
      std::ostringstream csv;
      csv << "n,user,page,permuted_user,permuted_page\n";
      for (std::size_t pos = 0; pos < users.size(); ++pos) {
        const std::int64_t orig = perm.inverse[pos];
        csv << (pos + 1) << ',' << users[pos] << ",X^" << users[pos] << '_'
            << (pos + 1) << ',' << users[orig] << ",X^" << users[orig] << '_'
            << (orig + 1) << '\n';
      }
      write_text(out_dir / "permute_demo.csv", csv.str());
      finish("permute-demo", out_dir, config_hash, seed,
             {"permute_demo.csv"});
    } else if (*rev_cmd) {
      const std::vector<double> bid_values = parse_doubles(bids_s);
      const BidProfile bids = Eigen::Map<const Eigen::VectorXd>(
          bid_values.data(), bid_values.size());
      std::ostringstream csv;
      csv << "reserve,revenue\n";
      const long steps =
          std::lround((grid_max - grid_min) / grid_step);
      for (long i = 0; i <= steps; ++i) {
        const double p = grid_min + static_cast<double>(i) * grid_step;
        csv << fmt(p) << ',' << fmt(auction_revenue(p, bids)) << '\n';
      }
      write_text(out_dir / "revenue_curve.csv", csv.str());
      finish("revenue-curve", out_dir, config_hash, seed,
             {"revenue_curve.csv"});
    } else if (*diag_cmd) {
      const auto policy = ReservePolicy::constant(reserve_v);
      json doc;
      std::ostringstream csv;
      csv << "k,discrepancy,relative,mean_S,mean_K,long_run_mean\n";
      for (int k : parse_ints(wald_days_s)) {
        const WaldReport wald =
            wald_check(cfg, policy, k, wald_reps, seed, ref_days);
        csv << k << ',' << fmt(wald.discrepancy) << ',' << wald.relative
            << ',' << fmt(wald.mean_sum) << ',' << fmt(wald.mean_count) << ','
            << fmt(wald.long_run_mean) << '\n';
      }
      write_text(out_dir / "wald.csv", csv.str());
      const AnscombeReport report =
          anscombe_diagnostic(cfg, policy, days, anscombe_reps, seed,
                              warmup_days, ref_days);
      doc["k"] = days;
      doc["replications"] = report.replications;
      doc["degenerate"] = report.degenerate;
      doc["q025"] = report.q025;
      doc["q50"] = report.q50;
      doc["q975"] = report.q975;
      doc["targets"] = {-1.959963984540054, 0.0, 1.959963984540054};
      doc["mu"] = report.mu;
      doc["sigma"] = report.sigma;
      write_text(out_dir / "anscombe.json", doc.dump(2) + "\n");
      finish("diagnostics", out_dir, config_hash, seed,
             {"wald.csv", "anscombe.json"});
    }
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cerr << err.dump() << std::endl;
    return 1;
  }
  return 0;
}
