#include "adsim/io.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "adsim/rng.hpp"

namespace adsim {

namespace {

using nlohmann::json;

KernelRow parse_row(const json& row, const ScenarioConfig& cfg,
                    const std::string& label) {
  KernelRow out;
  out.page_probs = Eigen::VectorXd::Zero(cfg.pages.size());
  for (auto it = row.begin(); it != row.end(); ++it) {
    if (it.key() == "end") {
      out.end_prob = it.value().get<double>();
    } else {
      bool known = false;
      for (std::size_t i = 0; i < cfg.pages.size(); ++i) {
        if (cfg.pages[i] == it.key()) {
          out.page_probs[i] = it.value().get<double>();
          known = true;
          break;
        }
      }
      if (!known) {
        throw ConfigError(label + ": unknown page id '" + it.key() + "'");
      }
    }
  }
  return out;
}

}  // namespace

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("scenario parse error in " + path.string() + ": " +
                      e.what());
  }

  ScenarioConfig cfg;
  try {
    cfg.num_users = doc.at("num_users").get<int>();
    cfg.num_advertisers = doc.at("num_advertisers").get<int>();
    cfg.pages = doc.at("pages").get<std::vector<std::string>>();
    cfg.session_cap = doc.at("session_cap").get<int>();
    cfg.concurrency_cap = doc.at("concurrency_cap").get<int>();
    cfg.bid_cap = doc.at("bid_cap").get<double>();
    cfg.arrival_prob = doc.at("arrival_prob").get<double>();
    cfg.ticks_per_day = doc.at("ticks_per_day").get<int>();

    cfg.session_start = Eigen::VectorXd::Zero(cfg.pages.size());
    for (auto it = doc.at("session_start").begin();
         it != doc.at("session_start").end(); ++it) {
      cfg.session_start[cfg.page_index(it.key())] = it.value().get<double>();
    }

    const json& kernels = doc.at("kernels");
    cfg.kernel_unsold.resize(cfg.pages.size());
    cfg.kernel_sold.resize(cfg.pages.size());
    cfg.kernel_sold_by_winner.resize(cfg.pages.size());
    for (std::size_t i = 0; i < cfg.pages.size(); ++i) {
      const std::string& name = cfg.pages[i];
      if (!kernels.contains(name)) {
        throw ConfigError("kernels: missing page '" + name + "'");
      }
      const json& entry = kernels.at(name);
      cfg.kernel_unsold[i] =
          parse_row(entry.at("unsold"), cfg, "kernel[" + name + "].unsold");
      cfg.kernel_sold[i] =
          parse_row(entry.at("sold"), cfg, "kernel[" + name + "].sold");
      if (entry.contains("sold_by_winner")) {
        for (const auto& row : entry.at("sold_by_winner")) {
          cfg.kernel_sold_by_winner[i].push_back(parse_row(
              row, cfg, "kernel[" + name + "].sold_by_winner"));
        }
      }
    }

    const json& val = doc.at("valuations");
    cfg.valuations =
        Eigen::MatrixXd::Zero(cfg.pages.size(), cfg.num_advertisers);
    for (std::size_t i = 0; i < cfg.pages.size(); ++i) {
      const auto& row = val.at(cfg.pages[i]);
      for (int j = 0; j < cfg.num_advertisers && j < static_cast<int>(row.size());
           ++j) {
        cfg.valuations(i, j) = row[j].get<double>();
      }
      if (static_cast<int>(row.size()) != cfg.num_advertisers) {
        throw ConfigError("valuations[" + cfg.pages[i] +
                          "]: need one entry per advertiser");
      }
    }

    const auto budgets = doc.at("initial_budgets").get<std::vector<double>>();
    cfg.initial_budgets =
        Eigen::Map<const Eigen::VectorXd>(budgets.data(), budgets.size());

    for (const auto& entry : doc.at("replenishment")) {
      ReplenishmentParams rp;
      rp.prob = entry.at("prob").get<double>();
      rp.amount = entry.at("amount").get<double>();
      cfg.replenishment.push_back(rp);
    }
  } catch (const json::exception& e) {
    throw ConfigError("scenario schema error in " + path.string() + ": " +
                      e.what());
  }

  cfg.validate();
  return cfg;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file for hashing: " + path.string());
  std::uint64_t h = 0x243F6A8885A308D3ull;  // arbitrary fixed offset
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h = mix64(h ^ static_cast<unsigned char>(buf[i]));
    }
  }
  return h;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir) {
  json doc;
  doc["command"] = manifest.command;
  doc["config_hash"] = manifest.config_hash;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["timestamp"] = manifest.timestamp;
  doc["outputs"] = manifest.outputs;
  std::ofstream out(out_dir / "manifest.json");
  out << doc.dump(2) << "\n";
}

}  // namespace adsim
