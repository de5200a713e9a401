#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "iotchain/monitor/behavior_monitor.hpp"
#include "iotchain/nn/train.hpp"
#include "iotchain/zone/transport.hpp"

namespace iotchain::cli {

/// Every tunable of the CLI. Loaded from a JSON file, then overridden by flags.
struct RunConfig {
  std::uint64_t seed = 7;

  std::string data_dir = "data";
  std::string model_path = "model/detector.bin";
  std::string out_dir = "out";
  std::string reports_dir = "reports";

  std::size_t zones = 2;
  std::size_t devices_per_zone = 3;
  std::uint64_t ticks = 200;

  nn::TrainConfig train;
  std::vector<double> lr_grid = {0.1, 0.01, 0.001};
  double split_ratio = 2.0 / 3.0;
  std::size_t min_snapshots = 50;

  std::size_t blocksize = 10;
  monitor::TrustConfig trust;
  double gate_p = 0.01;

  std::size_t trees = 100;
  std::size_t subsample = 256;
  std::size_t lof_k = 20;
  double quantile = 0.99;

  std::size_t training_rows = 1500;
  zone::FaultModel faults;

  /// Throws Error(Errc::invalid_argument) naming the first bad field.
  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::filesystem::path& path);
};

struct FileDigest {
  std::string path;
  std::string sha256;
};

FileDigest digest_file(const std::filesystem::path& path);

/// manifest.json: command, seed, effective config and SHA-256 of every input and output.
void write_manifest(const std::filesystem::path& path, const std::string& command, const RunConfig& config,
                    const std::vector<std::filesystem::path>& inputs,
                    const std::vector<std::filesystem::path>& outputs);

}  // namespace iotchain::cli
