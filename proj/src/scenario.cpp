#include "adsim/scenario.hpp"

#include <cmath>
#include <sstream>

namespace adsim {

int KernelRow::sample(double u) const {
  double cum = 0.0;
  for (Eigen::Index i = 0; i < page_probs.size(); ++i) {
    cum += page_probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return -1;  // end-of-session absorbs any rounding slack
}

int ScenarioConfig::page_index(const std::string& name) const {
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (pages[i] == name) return static_cast<int>(i);
  }
  throw ConfigError("unknown page id: " + name);
}

const KernelRow& ScenarioConfig::kernel(int page, bool sold,
                                        int winner) const {
  if (page < 0 || page >= static_cast<int>(pages.size())) {
    throw ConfigError("kernel lookup for invalid page " + std::to_string(page));
  }
  if (!sold) return kernel_unsold[page];
  if (winner >= 0 && !kernel_sold_by_winner[page].empty()) {
    return kernel_sold_by_winner[page][winner];
  }
  return kernel_sold[page];
}

namespace {

void check_row(const KernelRow& row, int num_pages, const std::string& label,
               std::ostringstream& errors) {
  if (row.page_probs.size() != num_pages) {
    errors << "  " << label << ": row has " << row.page_probs.size()
           << " page entries, expected " << num_pages << "\n";
    return;
  }
  if (row.end_prob < 0 || (row.page_probs.size() > 0 &&
                           row.page_probs.minCoeff() < 0)) {
    errors << "  " << label << ": negative probability\n";
  }
  if (std::abs(row.total() - 1.0) > 1e-12) {
    errors << "  " << label << ": row sums to " << row.total()
           << ", expected 1\n";
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  std::ostringstream errors;
  const int p = static_cast<int>(pages.size());

  if (num_users < 1) errors << "  num_users must be positive\n";
  if (num_advertisers < 1) errors << "  num_advertisers must be positive\n";
  if (p < 1) errors << "  page set must be nonempty\n";
  if (session_cap < 1) errors << "  session_cap L must be positive\n";
  if (concurrency_cap < 1) errors << "  concurrency_cap S must be positive\n";
  if (bid_cap <= 0) errors << "  bid_cap B must be positive\n";
  if (ticks_per_day < 1) errors << "  ticks_per_day must be positive\n";
  if (arrival_prob < 0 || arrival_prob > 1) {
    errors << "  arrival_prob must be in [0, 1]\n";
  }

  if (session_start.size() != p) {
    errors << "  session_start: size mismatch\n";
  } else if (p > 0) {
    if (session_start.minCoeff() < 0) {
      errors << "  session_start: negative probability\n";
    }
    if (std::abs(session_start.sum() - 1.0) > 1e-12) {
      errors << "  session_start: sums to " << session_start.sum() << "\n";
    }
  }

  if (static_cast<int>(kernel_unsold.size()) != p ||
      static_cast<int>(kernel_sold.size()) != p ||
      static_cast<int>(kernel_sold_by_winner.size()) != p) {
    errors << "  kernels: need one unsold and one sold row per page\n";
  } else {
    for (int i = 0; i < p; ++i) {
      check_row(kernel_unsold[i], p, "kernel[" + pages[i] + "].unsold",
                errors);
      check_row(kernel_sold[i], p, "kernel[" + pages[i] + "].sold", errors);
      if (!kernel_sold_by_winner[i].empty()) {
        if (static_cast<int>(kernel_sold_by_winner[i].size()) !=
            num_advertisers) {
          errors << "  kernel[" << pages[i]
                 << "].sold_by_winner: need one row per advertiser\n";
        } else {
          for (int j = 0; j < num_advertisers; ++j) {
            check_row(kernel_sold_by_winner[i][j], p,
                      "kernel[" + pages[i] + "].sold_by_winner[" +
                          std::to_string(j) + "]",
                      errors);
          }
        }
      }
    }
  }

  if (valuations.rows() != p || valuations.cols() != num_advertisers) {
    errors << "  valuations: expected " << p << "x" << num_advertisers
           << " table\n";
  } else if (valuations.size() > 0) {
    if (valuations.minCoeff() < 0) errors << "  valuations: negative entry\n";
    if (valuations.maxCoeff() > bid_cap) {
      errors << "  valuations: entry exceeds bid_cap B\n";
    }
  }

  if (initial_budgets.size() != num_advertisers) {
    errors << "  initial_budgets: size mismatch\n";
  } else if (initial_budgets.size() > 0 && initial_budgets.minCoeff() < 0) {
    errors << "  initial_budgets: negative entry\n";
  }

  if (static_cast<int>(replenishment.size()) != num_advertisers) {
    errors << "  replenishment: size mismatch\n";
  } else {
    for (int j = 0; j < static_cast<int>(replenishment.size()); ++j) {
      if (replenishment[j].prob < 0 || replenishment[j].prob > 1 ||
          replenishment[j].amount < 0) {
        errors << "  replenishment[" << j << "]: invalid parameters\n";
      }
    }
  }

  const std::string msg = errors.str();
  if (!msg.empty()) throw ConfigError("invalid scenario:\n" + msg);
}

}  // namespace adsim
