#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adsim/scenario.hpp"

namespace adsim {

inline constexpr const char* kToolVersion = "0.1.0";

// Parses and validates a scenario file (JSON schema documented in the
// README). All validation failures are reported together.
ScenarioConfig load_config(const std::filesystem::path& path);

// 64-bit content hash of a file, built from the same mix as the stream
// derivation; used to pin configs in run manifests.
std::uint64_t hash_file(const std::filesystem::path& path);

// Provenance record written next to every command's outputs. The timestamp
// lives only here so that payload files stay byte-reproducible.
struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version = kToolVersion;
  std::string timestamp;
  std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& out_dir);

}  // namespace adsim
